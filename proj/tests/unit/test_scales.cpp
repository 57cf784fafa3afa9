#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "memcap/errors.hpp"
#include "memcap/optim.hpp"
#include "memcap/scales.hpp"

using namespace memcap;

namespace {

std::vector<double> random_gammas(std::mt19937_64& rng, std::size_t l) {
  std::uniform_real_distribution<double> u(0.0, 0.95);
  std::vector<double> g(l);
  for (auto& x : g) x = u(rng);
  return g;
}

}  // namespace

TEST_CASE("two-branch capacities against independent values") {
  const double g[] = {0.0, 0.4};
  CHECK(std::abs(capacity_periodic(g) - 0.7718268599636) < 1e-10);
  CHECK(std::abs(cbar_periodic(g) - 0.7764783532281) < 1e-10);
  CHECK(std::abs(chi_star_avg_pair(0.0, 0.4) - cbar_periodic(g)) < 1e-14);
}

TEST_CASE("scale endpoints and monotonicity on random amplitude damping sets") {
  std::mt19937_64 rng(20240611);
  for (std::size_t l = 2; l <= 5; ++l) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto g = random_gammas(rng, l);
      const auto set = BranchSet::amplitude_damping(g);
      CHECK(std::abs(scale_r(set, 1).value - cbar_periodic(set)) < 1e-7);
      CHECK(std::abs(scale_r(set, l).value - capacity_periodic(set)) < 1e-7);
      double prev = scale_r(set, 1).value;
      for (std::size_t r = 2; r <= l; ++r) {
        const double v = scale_r(set, r).value;
        CHECK(v <= prev + 1e-9);
        prev = v;
      }
    }
  }
}

TEST_CASE("four-branch scale against independent values") {
  const double g[] = {0.0, 0.2, 0.4, 0.6};
  const auto set = BranchSet::amplitude_damping(g);
  const double expect[] = {0.66915488267, 0.66715368332, 0.66605855012, 0.66557531798};
  const auto rows = staircase_profile(set);
  REQUIRE(rows.size() == 4);
  for (std::size_t r = 1; r <= 4; ++r) {
    const auto& row = rows[r - 1];
    CHECK(row.r == r);
    CHECK(std::abs(row.rate - expect[r - 1]) < 1e-10);
    CHECK(row.subset.size() == r);
    CHECK(std::abs(subset_scale_value(set, row.subset) - row.rate) < 1e-14);
    CHECK(row.error_threshold == doctest::Approx(1.0 - r / 4.0));
  }
  // Every single offset sees each branch once, so all r = 1 subsets tie.
  const std::size_t s2[] = {2};
  CHECK(std::abs(subset_scale_value(set, s2) - expect[0]) < 1e-10);
  CHECK(pair_capacity(set).value == rows[1].rate);
}

TEST_CASE("pair capacity of two branches is the periodic capacity") {
  const double g[] = {0.25, 0.65};
  CHECK(std::abs(pair_capacity(g).value - capacity_periodic(g)) < 1e-12);
  CHECK(pair_capacity(g).subset == std::vector<std::size_t>{0, 1});
}

TEST_CASE("strict gap between C_p and the averaged suprema") {
  const double min_gap = 1e-6;
  int below_margin = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      const double g[] = {0.1 * i, 0.1 * j};
      const double gap = chi_star_avg_pair(g[0], g[1]) - capacity_periodic(g);
      CHECK(gap > 0.0);
      if (gap <= min_gap) ++below_margin;
    }
  }
  // Nearby damping values give gaps of order 1e-7: (0.6, 0.7), (0.6, 0.8),
  // (0.7, 0.8) in both orders.
  CHECK(below_margin == 6);
  const double close[] = {0.6, 0.8};
  const double gap = chi_star_avg_pair(0.6, 0.8) - capacity_periodic(close);
  CHECK(gap == doctest::Approx(4.09e-8).epsilon(0.02));
}

TEST_CASE("a fully damping branch closes the gap") {
  for (double g0 : {0.0, 0.3, 0.9}) {
    const double g[] = {g0, 1.0};
    CHECK(std::abs(chi_star_avg_pair(g0, 1.0) - capacity_periodic(g)) < 1e-7);
  }
}

TEST_CASE("equal branches have no gap") {
  const double g[] = {0.35, 0.35, 0.35};
  CHECK(std::abs(capacity_periodic(g) - cbar_periodic(g)) < 1e-12);
}

TEST_CASE("depolarizing branches share the optimal ensemble") {
  const BranchSet set({QubitChannel::depolarizing(0.1), QubitChannel::depolarizing(0.3)});
  CHECK_FALSE(set.closed_form());
  CHECK(std::abs(capacity_periodic(set) - cbar_periodic(set)) < 1e-6);
  const auto rows = staircase_profile(set);
  CHECK(std::abs(rows[0].rate - rows[1].rate) < 1e-6);
}

TEST_CASE("random channel scale") {
  const double g[] = {0.1, 0.5, 0.8};
  const double q[] = {0.5, 0.3, 0.2};
  const std::size_t d01[] = {0, 1};
  const auto e = random_scale(g, q, d01);
  CHECK(e.q_delta == doctest::Approx(0.8));
  const double gg[] = {0.1, 0.5};
  CHECK(std::abs(e.c_delta - maximize_chi_min(gg).value) < 1e-12);
  CHECK(std::abs(e.cbar_delta - chi_star(0.1).value) < 1e-12);
  // Independent value: the weaker branch is the binding one.
  CHECK(std::abs(e.c_delta - 0.4717293905593) < 1e-9);

  const auto rep = random_scale_report(BranchSet::amplitude_damping(g), q);
  REQUIRE(rep.per_subset.size() == 7);
  CHECK(rep.per_subset[3].delta == std::vector<std::size_t>{0, 1});
  // Growing Delta can only lower C^Delta and raise q(Delta).
  for (const auto& a : rep.per_subset) {
    for (const auto& b : rep.per_subset) {
      bool sub = a.delta.size() < b.delta.size();
      for (std::size_t i : a.delta) sub = sub && std::count(b.delta.begin(), b.delta.end(), i) > 0;
      if (!sub) continue;
      CHECK(b.c_delta <= a.c_delta + 1e-12);
      CHECK(b.q_delta >= a.q_delta);
      CHECK(b.cbar_delta >= a.cbar_delta);
    }
  }
}

TEST_CASE("scale validation") {
  const double g[] = {0.1, 0.2};
  CHECK_THROWS_AS(scale_r(g, 0), ValidationError);
  CHECK_THROWS_AS(scale_r(g, 3), ValidationError);
  const double one[] = {0.1};
  CHECK_THROWS_AS(pair_capacity(one), ValidationError);
  const double bad_q[] = {0.5, 0.6};
  const std::size_t d[] = {0};
  CHECK_THROWS_AS(random_scale(g, bad_q, d), ValidationError);
  const double q[] = {0.5, 0.5};
  const std::size_t unsorted[] = {1, 0};
  CHECK_THROWS_AS(random_scale(g, q, unsorted), ValidationError);
  CHECK_THROWS_AS(random_scale(g, q, std::span<const std::size_t>{}), ValidationError);
  std::vector<double> many(13, 0.2);
  CHECK_THROWS_AS(scale_r(many, 2), ResourceError);
  CHECK_THROWS_AS(capacity_periodic(std::vector<double>{1.2}), ValidationError);
}

TEST_CASE("capacity report serialisation") {
  const double g[] = {0.0, 0.4};
  const auto rep = capacity_report(BranchSet::amplitude_damping(g));
  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j["method"] == "mirror_pair_closed_form");
  CHECK(std::abs(j["cp"].get<double>() - 0.7718268599636) < 1e-11);
  CHECK(std::abs(j["scale"]["1"]["value"].get<double>() - rep.cbar) < 1e-11);
  CHECK(j["scale"]["2"]["best_subset"] == nlohmann::json::array({0, 1}));
  CHECK(j["per_branch_suprema"][0]["a_max"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(j["per_branch_suprema"].size() == 2);

  const std::string csv = to_csv(rep);
  CHECK(csv.rfind("r,value_bits,subset,error_threshold\n1,", 0) == 0);
  CHECK(csv.find("\n2,0.7718268599") != std::string::npos);
  CHECK(csv.size() > 7);
  CHECK(csv.substr(csv.size() - 7) == ",0;1,0\n");
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("generic report has no mirror parameter") {
  const BranchSet set({QubitChannel::depolarizing(0.2), QubitChannel::amplitude_damping(0.3)}, 12);
  const auto j = nlohmann::json::parse(to_json(capacity_report(set)));
  CHECK(j["method"] == "grid_ensemble_search");
  CHECK(j["per_branch_suprema"][0]["a_max"].is_null());
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1234567890123456) == "0.123456789012");
  CHECK(format_number(1.5e-9) == "1.5e-09");
  const std::size_t s[] = {0, 2, 3};
  CHECK(format_subset(s) == "0;2;3");
}
