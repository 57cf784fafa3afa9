#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "memcap/errors.hpp"
#include "memcap/holevo.hpp"
#include "memcap/optim.hpp"

using namespace memcap;

namespace {

struct GridMax {
  double argmax;
  double value;
};

// Exhaustive grid oracle on [0, 1].
template <class F>
GridMax grid_argmax(F f, double step = 1e-5) {
  GridMax best{0.0, -std::numeric_limits<double>::infinity()};
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int k = 0; k <= n; ++k) {
    const double a = k * step;
    const double v = f(a);
    if (v > best.value) best = {a, v};
  }
  return best;
}

}  // namespace

TEST_CASE("maximize_concave_1d on a quadratic") {
  const auto r = maximize_concave_1d([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-8);
  CHECK(std::abs(r.argmax - 0.3) < 1e-8);
  CHECK(r.achieved_tol <= 1e-8);
  CHECK(r.iterations > 0);
}

TEST_CASE("maximize_concave_1d errors and flat functions") {
  CHECK_THROWS_AS(maximize_concave_1d([](double) { return 0.0; }, 1.0, 0.0, 1e-8), ValidationError);
  CHECK_THROWS_AS(maximize_concave_1d([](double) { return 0.0; }, 0.0, 1.0, 1e-13), ValidationError);
  CHECK_THROWS_AS(maximize_concave_1d([](double) { return std::nan(""); }, 0.0, 1.0, 1e-8), NumericalError);
  const auto flat = maximize_concave_1d([](double) { return 2.0; }, 0.2, 0.6, 1e-8);
  CHECK(flat.argmax == doctest::Approx(0.4));
  CHECK(flat.value == 2.0);
}

TEST_CASE("find_root_bisection") {
  CHECK(std::abs(find_root_bisection([](double x) { return x - 0.25; }, 0.0, 1.0, 1e-10) - 0.25) < 1e-10);
  CHECK(std::abs(find_root_bisection([](double a) { return dchi_da_ad(0.0, a); }, 0.4, 0.6, 1e-10) - 0.5) < 1e-10);
  CHECK_THROWS_AS(find_root_bisection([](double x) { return x + 1.0; }, 0.0, 1.0), BracketError);
  const double root = find_root_bisection([](double a) { return dchi_da_ad(0.2, a); }, 0.5, 0.999, 1e-10);
  CHECK(std::abs(root - chi_star(0.2).argmax) < 1e-5);
}

TEST_CASE("identity channel supremum") {
  const auto r = chi_star(0.0);
  CHECK(std::abs(r.argmax - 0.5) < 1e-6);
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  const auto dead = chi_star(1.0);
  CHECK(dead.value == 0.0);
  CHECK(dead.argmax == doctest::Approx(0.5 * (kAdSearchLo + kAdSearchHi)));
}

TEST_CASE("chi_star agrees with the exhaustive grid") {
  const auto grid = grid_argmax([](double a) { return chi_ad_mirror(0.3, a); });
  const auto r = chi_star(0.3);
  CHECK(std::abs(r.argmax - grid.argmax) < 2e-5);
  CHECK(r.value >= grid.value - 1e-12);
  // 30-digit golden-section reference
  CHECK(std::abs(r.value - 0.63832906028176) < 1e-12);
  CHECK(std::abs(r.argmax - 0.580531928932) < 1e-6);
}

TEST_CASE("bisection root matches the optimiser for every gamma") {
  for (int i = 1; i <= 9; ++i) {
    const double g = i / 10.0;
    const double root = find_root_bisection([g](double a) { return dchi_da_ad(g, a); }, 0.5, 1.0 - 1e-9, 1e-12);
    CHECK(std::abs(root - chi_star(g).argmax) < 1e-5);
  }
}

TEST_CASE("maximize_chi_sum") {
  const double g0[] = {0.0};
  const double w1[] = {1.0};
  const auto single = maximize_chi_sum(g0, w1);
  CHECK(std::abs(single.argmax - 0.5) < 1e-6);
  CHECK(std::abs(single.value - 1.0) < 1e-12);

  const double twin[] = {0.35, 0.35};
  const double half[] = {0.5, 0.5};
  const auto t = maximize_chi_sum(twin, half);
  const auto s = chi_star(0.35);
  CHECK(std::abs(t.value - s.value) < 1e-12);
  CHECK(std::abs(t.argmax - s.argmax) < 1e-6);

  const double mixed[] = {0.0, 0.4};
  const auto m = maximize_chi_sum(mixed, half);
  CHECK(m.argmax > 0.5);
  CHECK(m.argmax < chi_star(0.4).argmax);

  const double empty[] = {1.0};
  CHECK_THROWS_AS(maximize_chi_sum(std::span<const double>(), std::span<const double>()), ValidationError);
  CHECK_THROWS_AS(maximize_chi_sum(mixed, empty), ValidationError);
  const double negative[] = {0.5, -0.5};
  CHECK_THROWS_AS(maximize_chi_sum(mixed, negative), ValidationError);
}

TEST_CASE("weights concentrated on one branch reproduce its supremum") {
  const double g[] = {0.1, 0.6, 0.85};
  for (std::size_t k = 0; k < 3; ++k) {
    double w[] = {0.0, 0.0, 0.0};
    w[k] = 1.0;
    CHECK(std::abs(maximize_chi_sum(g, w).value - chi_star(g[k]).value) < 1e-12);
  }
}

TEST_CASE("joint argmax lies between the individual argmaxes") {
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      const double g[] = {i / 10.0, j / 10.0};
      const double w[] = {0.5, 0.5};
      const double a0 = chi_star(g[0]).argmax, a1 = chi_star(g[1]).argmax;
      const double joint = maximize_chi_sum(g, w).argmax;
      CHECK(joint >= std::min(a0, a1) - 1e-6);
      CHECK(joint <= std::max(a0, a1) + 1e-6);
    }
  }
}

TEST_CASE("maximize_chi_min") {
  const double single[] = {0.45};
  CHECK(std::abs(maximize_chi_min(single).value - chi_star(0.45).value) < 1e-12);
  const double zeros[] = {0.0, 0.0};
  const auto z = maximize_chi_min(zeros);
  CHECK(std::abs(z.argmax - 0.5) < 1e-6);
  CHECK(std::abs(z.value - 1.0) < 1e-12);

  const double pair[] = {0.1, 0.5};
  const auto r = maximize_chi_min(pair);
  CHECK(r.value <= std::min(chi_star(0.1).value, chi_star(0.5).value) + 1e-12);
  const auto grid = grid_argmax([](double a) { return std::min(chi_ad_mirror(0.1, a), chi_ad_mirror(0.5, a)); });
  CHECK(std::abs(r.value - grid.value) < 1e-9);
  CHECK(std::abs(r.argmax - grid.argmax) < 2e-5);
  CHECK_THROWS_AS(maximize_chi_min(std::span<const double>()), ValidationError);
}

TEST_CASE("the optimum sits at a >= 1/2") {
  for (int i = 0; i <= 95; ++i) CHECK(chi_star(i / 100.0).argmax >= 0.5 - 1e-6);
}

TEST_CASE("chi* decreases with gamma") {
  for (int i = 0; i < 9; ++i) CHECK(chi_star(i / 10.0).value > chi_star((i + 1) / 10.0).value + 1e-6);
}

TEST_CASE("a_max rises with gamma up to 0.7 and then turns back") {
  // 40-digit references: a_max(0.6) = 0.59997756, a_max(0.7) = 0.60135904,
  // a_max(0.8) = 0.59958791, a_max(0.9) = 0.59219131.
  for (int i = 0; i < 7; ++i) CHECK(chi_star(i / 10.0).argmax < chi_star((i + 1) / 10.0).argmax - 1e-6);
  CHECK(chi_star(0.8).argmax < chi_star(0.7).argmax);
  CHECK(chi_star(0.9).argmax < chi_star(0.8).argmax);
  CHECK(std::abs(chi_star(0.7).argmax - 0.601359035936) < 1e-6);
}
