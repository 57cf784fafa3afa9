#include "memcap/holevo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memcap/errors.hpp"

namespace memcap {

namespace {

constexpr double kSimplexTol = 1e-10;

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

// 4 gamma (1 - gamma) (1 - a)^2, the determinant of either mirror output times 4.
double ad_det4(double gamma, double a) { return 4.0 * gamma * (1.0 - gamma) * (1.0 - a) * (1.0 - a); }

double ad_discriminant(double gamma, double a) { return std::sqrt(std::max(0.0, 1.0 - ad_det4(gamma, a))); }

}  // namespace

Ensemble::Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {
  if (items_.empty()) throw ValidationError("ensemble must be nonempty");
  double sum = 0.0;
  for (const auto& it : items_) {
    if (!(it.prob >= 0.0)) throw ValidationError("ensemble probability must be nonnegative");
    if (it.state.dim() != items_.front().state.dim()) throw ValidationError("ensemble states differ in dimension");
    sum += it.prob;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) throw ValidationError("ensemble probabilities do not sum to 1");
}

Ensemble MirrorPair::expand() const {
  check_unit(a, "a");
  const double b = std::sqrt(a * (1.0 - a));
  return Ensemble({{0.5, DensityMatrix::qubit(a, b)}, {0.5, DensityMatrix::qubit(a, -b)}});
}

DensityMatrix average_output(const QubitChannel& ch, const Ensemble& e) {
  ComplexMatrix sum(2);
  for (const auto& it : e.items()) sum += it.prob * ch.apply(it.state).matrix();
  return DensityMatrix(std::move(sum));
}

double holevo_quantity(const QubitChannel& ch, const Ensemble& e) {
  ComplexMatrix avg(2);
  double conditional = 0.0;
  for (const auto& it : e.items()) {
    const DensityMatrix out = ch.apply(it.state);
    avg += it.prob * out.matrix();
    conditional += it.prob * von_neumann_entropy(out);
  }
  return von_neumann_entropy(DensityMatrix(std::move(avg))) - conditional;
}

std::array<double, 2> ad_mirror_output_eigenvalues(double gamma, double a) {
  check_unit(gamma, "gamma");
  check_unit(a, "a");
  const double x = ad_discriminant(gamma, a);
  // 1 - x = det4 / (1 + x) avoids cancellation when the output is nearly pure.
  return {0.5 * (1.0 + x), 0.5 * ad_det4(gamma, a) / (1.0 + x)};
}

double chi_ad_mirror(double gamma, double a) {
  const auto eig = ad_mirror_output_eigenvalues(gamma, a);
  return binary_entropy(a + (1.0 - a) * gamma) - binary_entropy(eig[1]);
}

double dchi_da_ad(double gamma, double a) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("dchi_da_ad requires gamma in [0, 1)");
  if (!(a > 0.0 && a < 1.0)) throw SingularPointError("dchi_da_ad is singular at a = 0 and a = 1");
  const double x = ad_discriminant(gamma, a);
  if (x == 0.0) throw SingularPointError("dchi_da_ad is singular where x = 0");
  const double first = (1.0 - gamma) * std::log(((1.0 - a) * (1.0 - gamma)) / (a + (1.0 - a) * gamma));
  if (gamma == 0.0) return first;
  const double one_minus_x = ad_det4(gamma, a) / (1.0 + x);
  const double second = 2.0 * gamma * (1.0 - gamma) * (1.0 - a) / x * std::log((1.0 + x) / one_minus_x);
  return first + second;
}

}  // namespace memcap
