#pragma once

#include <array>
#include <vector>

#include "memcap/channels.hpp"
#include "memcap/linalg.hpp"

namespace memcap {

struct EnsembleItem {
  double prob;
  DensityMatrix state;
};

/// Weighted list of input states; probabilities sum to one within 1e-10.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleItem> items);

  const std::vector<EnsembleItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t dim() const { return items_.front().state.dim(); }

 private:
  std::vector<EnsembleItem> items_;
};

/// Two pure qubit states sharing the diagonal parameter a, with real
/// off-diagonals +sqrt(a(1-a)) and -sqrt(a(1-a)), each with probability 1/2.
struct MirrorPair {
  double a;

  Ensemble expand() const;
};

/// sum_j p_j Phi(rho_j)
DensityMatrix average_output(const QubitChannel& ch, const Ensemble& e);

/// S(sum_j p_j Phi(rho_j)) - sum_j p_j S(Phi(rho_j)), in bits.
double holevo_quantity(const QubitChannel& ch, const Ensemble& e);

/// Eigenvalues (1 +- x) / 2 of the amplitude-damping output of either mirror
/// state, x = sqrt(1 - 4 gamma (1 - gamma) (1 - a)^2). Ordered (+, -).
std::array<double, 2> ad_mirror_output_eigenvalues(double gamma, double a);

/// Holevo quantity of the mirror pair through amplitude damping, in bits:
/// H(a + (1-a) gamma) - H((1 - x) / 2).
double chi_ad_mirror(double gamma, double a);

/// d chi_ad_mirror / da in nats. Requires gamma in [0, 1) and a in (0, 1);
/// throws SingularPointError at a in {0, 1} or x = 0.
double dchi_da_ad(double gamma, double a);

}  // namespace memcap
