#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace memcap {

struct OptResult {
  double argmax;
  double value;
  int iterations;
  /// Half-width of the final bracket around argmax.
  double achieved_tol;
};

inline constexpr double kDefaultTol = 1e-8;
/// Search window for mirror-pair maximisation: a_max >= 1/2 with a small
/// margin on the left; the right edge stays off the a = 1 singularity.
inline constexpr double kAdSearchLo = 0.5 - 1e-3;
inline constexpr double kAdSearchHi = 1.0 - 1e-9;

/// Golden-section maximisation of a concave (unimodal) function on [lo, hi].
/// An exactly flat function returns the interval midpoint.
OptResult maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi,
                              double tol = kDefaultTol);

/// Bisection to bracket width <= tol. Requires g(lo) g(hi) <= 0.
double find_root_bisection(const std::function<double(double)>& g, double lo, double hi,
                           double tol = kDefaultTol);

/// sup_a sum_i w_i chi_ad_mirror(gamma_i, a).
OptResult maximize_chi_sum(std::span<const double> gammas, std::span<const double> weights,
                           double tol = kDefaultTol);

/// sup_a min_i chi_ad_mirror(gamma_i, a).
OptResult maximize_chi_min(std::span<const double> gammas, double tol = kDefaultTol);

/// Single-channel supremum (a_max, chi*) of the amplitude-damping mirror pair.
OptResult chi_star(double gamma, double tol = kDefaultTol);

}  // namespace memcap
