#include <doctest.h>

#include <cmath>

#include "memcap/ensemble_search.hpp"
#include "memcap/errors.hpp"
#include "memcap/optim.hpp"

using namespace memcap;

TEST_CASE("pure state grid layout") {
  const PureStateGrid g(24);
  CHECK(g.size() == 22u * 24u + 2u);
  CHECK(g.state(0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(g.state(g.size() - 1)(1, 1).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureStateGrid(1), ValidationError);
}

TEST_CASE("brute force trivial channels") {
  for (int n : {2, 4}) {
    CHECK(std::abs(brute_force_ensemble_search(QubitChannel::amplitude_damping(0.0), n, 8).value - 1.0) < 1e-9);
    CHECK(std::abs(brute_force_ensemble_search(QubitChannel::amplitude_damping(1.0), n, 8).value) < 1e-12);
  }
  CHECK(std::abs(brute_force_ensemble_search(QubitChannel::amplitude_damping(0.3), 1, 8).value) < 1e-12);
}

TEST_CASE("brute force value is reproduced by the generic Holevo path") {
  const auto ch = QubitChannel::amplitude_damping(0.3);
  const auto r = brute_force_ensemble_search(ch, 4, 24);
  CHECK(std::abs(holevo_quantity(ch, r.ensemble) - r.value) < 1e-10);
  // Frozen from this oracle; the mirror pair value is 0.638329060282.
  CHECK(std::abs(r.value - 0.637840836802) < 1e-9);
  CHECK(r.value - chi_star(0.3).value < 1e-3);
}

TEST_CASE("brute force is monotone in the number of states") {
  const auto ch = QubitChannel::amplitude_damping(0.45);
  double prev = -1.0;
  for (int n = 1; n <= 4; ++n) {
    const double v = brute_force_ensemble_search(ch, n, 8).value;
    // Values agree up to the Blahut-Arimoto gap.
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("finer grids close in on the mirror pair") {
  const auto ch = QubitChannel::amplitude_damping(0.3);
  const double mirror = chi_star(0.3).value;
  const double coarse = brute_force_ensemble_search(ch, 4, 12).value;
  const double fine = brute_force_ensemble_search(ch, 4, 32).value;
  CHECK(mirror - fine < mirror - coarse);
  CHECK(fine <= mirror + 1e-9);
}

TEST_CASE("brute force guards") {
  const auto ch = QubitChannel::amplitude_damping(0.3);
  CHECK_THROWS_AS(brute_force_ensemble_search(ch, 2, 7), ValidationError);
  CHECK_THROWS_AS(brute_force_ensemble_search(ch, 0, 8), ValidationError);
  CHECK_THROWS_AS(brute_force_ensemble_search(ch, 3, 24), ResourceError);
  CHECK_THROWS_AS(brute_force_ensemble_search(ch, 2, 24, 1000), ResourceError);
}

TEST_CASE("weighted-sum search certifies its value") {
  const QubitChannel chans[] = {QubitChannel::amplitude_damping(0.2), QubitChannel::amplitude_damping(0.6)};
  const double w[] = {1.0, 1.0};
  const PureStateGrid grid(24);
  const auto r = maximize_holevo_sum_on_grid(chans, w, grid);
  CHECK(r.upper_bound - r.value <= 1e-9);
  const double g[] = {0.2, 0.6};
  const double mirror = maximize_chi_sum(g, w).value;
  CHECK(r.value <= mirror + 1e-9);
  CHECK(mirror - r.value < 2e-3);
}

TEST_CASE("depolarizing suprema are found exactly on an even grid") {
  const PureStateGrid grid(24);
  for (double p : {0.1, 0.3, 0.8}) {
    const QubitChannel chans[] = {QubitChannel::depolarizing(p)};
    const double w[] = {1.0};
    const double expect = 1.0 - binary_entropy(0.5 * p);
    CHECK(std::abs(maximize_holevo_sum_on_grid(chans, w, grid).value - expect) < 1e-9);
  }
}

TEST_CASE("maximin search") {
  const PureStateGrid grid(16);
  const QubitChannel one[] = {QubitChannel::depolarizing(0.2)};
  const auto single = maximize_holevo_min_on_grid(one, grid);
  CHECK(std::abs(single.value - (1.0 - binary_entropy(0.1))) < 1e-8);

  const QubitChannel two[] = {QubitChannel::depolarizing(0.1), QubitChannel::depolarizing(0.3)};
  const auto r = maximize_holevo_min_on_grid(two, grid);
  CHECK(std::abs(r.value - (1.0 - binary_entropy(0.15))) < 1e-8);
  CHECK(r.upper_bound - r.value < 1e-6);

  const QubitChannel ad[] = {QubitChannel::amplitude_damping(0.1), QubitChannel::amplitude_damping(0.5)};
  GridSearchOptions loose;
  loose.gap_tol = 1e-8;
  const auto m = maximize_holevo_min_on_grid(ad, PureStateGrid(16), 1e-4, loose);
  const double g[] = {0.1, 0.5};
  CHECK(m.value <= maximize_chi_min(g).value + 1e-9);
  CHECK(maximize_chi_min(g).value - m.value < 5e-3);

  const QubitChannel five[] = {one[0], one[0], one[0], one[0], one[0]};
  CHECK_THROWS_AS(maximize_holevo_min_on_grid(five, grid), ResourceError);
}
