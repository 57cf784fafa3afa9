#include "memcap/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "memcap/errors.hpp"
#include "memcap/holevo.hpp"

namespace memcap {

namespace {

constexpr double kMinTol = 1e-12;
constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2

double checked(double v) {
  if (!std::isfinite(v)) throw NumericalError("objective returned a non-finite value");
  return v;
}

void check_interval(double lo, double hi, double tol) {
  if (!(lo < hi)) throw ValidationError("search interval requires lo < hi");
  if (!(tol >= kMinTol)) throw ValidationError("tolerance must be at least 1e-12");
}

void check_gammas(std::span<const double> gammas) {
  if (gammas.empty()) throw ValidationError("at least one branch parameter is required");
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("gamma must lie in [0, 1], got " + std::to_string(g));
  }
}

}  // namespace

OptResult maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi, double tol) {
  check_interval(lo, hi, tol);
  const double lo0 = lo;
  const double hi0 = hi;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = checked(f(c));
  double fd = checked(f(d));
  double seen_min = std::min(fc, fd);
  double seen_max = std::max(fc, fd);
  int it = 0;
  // Ties shrink towards the left so that the result is deterministic.
  while (0.5 * (hi - lo) > tol) {
    ++it;
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = checked(f(c));
      seen_min = std::min(seen_min, fc);
      seen_max = std::max(seen_max, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = checked(f(d));
      seen_min = std::min(seen_min, fd);
      seen_max = std::max(seen_max, fd);
    }
  }
  if (seen_max == seen_min) {
    const double mid = 0.5 * (lo0 + hi0);
    return {mid, checked(f(mid)), it, 0.5 * (hi - lo)};
  }
  const double x = 0.5 * (lo + hi);
  const double fx = checked(f(x));
  // Report the best of the midpoint and the two interior probes.
  OptResult best{x, fx, it, 0.5 * (hi - lo)};
  if (fc > best.value) best = {c, fc, it, 0.5 * (hi - lo)};
  if (fd > best.value) best = {d, fd, it, 0.5 * (hi - lo)};
  return best;
}

double find_root_bisection(const std::function<double(double)>& g, double lo, double hi, double tol) {
  check_interval(lo, hi, tol);
  double glo = checked(g(lo));
  const double ghi = checked(g(hi));
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw BracketError("no sign change on the bracketing interval");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = checked(g(mid));
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

OptResult maximize_chi_sum(std::span<const double> gammas, std::span<const double> weights, double tol) {
  check_gammas(gammas);
  if (weights.size() != gammas.size()) throw ValidationError("gammas and weights differ in length");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
  }
  auto f = [&](double a) {
    double s = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      if (weights[i] != 0.0) s += weights[i] * chi_ad_mirror(gammas[i], a);
    }
    return s;
  };
  return maximize_concave_1d(f, kAdSearchLo, kAdSearchHi, tol);
}

OptResult maximize_chi_min(std::span<const double> gammas, double tol) {
  check_gammas(gammas);
  auto f = [&](double a) {
    double m = std::numeric_limits<double>::infinity();
    for (double g : gammas) m = std::min(m, chi_ad_mirror(g, a));
    return m;
  };
  return maximize_concave_1d(f, kAdSearchLo, kAdSearchHi, tol);
}

OptResult chi_star(double gamma, double tol) {
  const double g[] = {gamma};
  const double w[] = {1.0};
  return maximize_chi_sum(g, w, tol);
}

}  // namespace memcap
