#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "memcap/channels.hpp"
#include "memcap/holevo.hpp"

namespace memcap {

/// Pure qubit states on a polar/azimuthal grid.
///
/// Polar angles j pi / (grid - 1), j = 0..grid-1, include both poles; azimuths
/// are 2 pi k / grid. The poles appear once each, so the grid holds
/// (grid - 2) * grid + 2 states. An even grid is closed under antipodes.
class PureStateGrid {
 public:
  explicit PureStateGrid(int grid);

  int resolution() const { return grid_; }
  std::size_t size() const { return states_.size(); }
  const DensityMatrix& state(std::size_t k) const { return states_[k]; }

 private:
  int grid_;
  std::vector<DensityMatrix> states_;
};

struct GridSearchOptions {
  /// Stop once the concavity certificate max_x g_x - f(p) drops below this.
  double gap_tol = 1e-9;
  int max_iterations = 200000;
};

struct GridEnsembleResult {
  double value = 0.0;
  /// Certified upper bound on the optimum over distributions on the grid.
  double upper_bound = 0.0;
  int iterations = 0;
  /// Optimal distribution over the searched candidate states (zeros dropped).
  std::vector<std::size_t> support;
  std::vector<double> probabilities;

  Ensemble ensemble(const PureStateGrid& grid) const;
};

/// sup_p sum_i w_i I(p; Phi_i) over distributions on the grid states.
///
/// Blahut-Arimoto multiplicative updates p_x <- p_x 2^{g_x / W}, g_x the
/// weighted divergence of output x from the average outputs, W = sum w_i.
/// Each step is monotone; the gap max_x g_x - sum_x p_x g_x bounds the
/// distance to the optimum from above.
GridEnsembleResult maximize_holevo_sum_on_grid(std::span<const QubitChannel> channels,
                                               std::span<const double> weights, const PureStateGrid& grid,
                                               const GridSearchOptions& opts = {});

struct MaximinResult {
  /// min_i I(p; Phi_i) at the best distribution found (achievable).
  double value = 0.0;
  /// min over the probed weights of sup_p sum_i w_i I(p; Phi_i).
  double upper_bound = 0.0;
  /// Number of inner weighted-sum solves.
  int inner_solves = 0;
};

inline constexpr std::size_t kMaxMaximinBranches = 4;

/// sup_p min_i I(p; Phi_i) over distributions on the grid states.
///
/// Uses the saddle-point form min_{w in simplex} sup_p sum_i w_i I(p; Phi_i).
/// The outer function is convex in w, so nested golden-section search over
/// the simplex coordinates (width weight_tol) is exact; at most four
/// channels are accepted.
MaximinResult maximize_holevo_min_on_grid(std::span<const QubitChannel> channels, const PureStateGrid& grid,
                                          double weight_tol = 1e-6, const GridSearchOptions& opts = {});

struct BruteForceResult {
  double value;
  Ensemble ensemble;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 5'000'000;

/// Best Holevo quantity over ensembles of at most n_states pure states drawn
/// from PureStateGrid(grid), probabilities optimised exactly per support.
///
/// For n_states <= 3 every n-subset of grid states is searched, in
/// lexicographic order with a strict improvement rule. A qubit ensemble needs
/// no more than four states to reach the optimum of its support set, so
/// n_states >= 4 is solved over the whole grid at once. Throws ResourceError
/// when the number of subsets exceeds `budget`.
BruteForceResult brute_force_ensemble_search(const QubitChannel& ch, int n_states, int grid,
                                             std::uint64_t budget = kDefaultSearchBudget);

}  // namespace memcap
