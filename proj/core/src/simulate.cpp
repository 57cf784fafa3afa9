#include "memcap/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <locale>
#include <sstream>

#include "memcap/errors.hpp"

namespace memcap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

void check_strategy(const ScaleOracle& oracle, const Strategy& s) {
  if (s.target_subset.empty()) throw ValidationError("strategy subset must be nonempty");
  if (!(s.rate >= 0.0) || !std::isfinite(s.rate)) throw ValidationError("strategy rate must be finite and nonnegative");
  for (std::size_t k = 0; k < s.target_subset.size(); ++k) {
    if (s.target_subset[k] >= oracle.size()) throw ValidationError("strategy subset index out of range");
    if (k && s.target_subset[k] <= s.target_subset[k - 1]) throw ValidationError("strategy subset must be strictly increasing");
  }
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Subset chosen for a rate, and whether its threshold exceeds the rate.
std::vector<std::size_t> choose_subset(const ScaleOracle& oracle, double rate) {
  const std::size_t l = oracle.size();
  if (oracle.periodic()) {
    ScaleEntry fallback{0.0, {}};
    for (std::size_t r = l; r >= 1; --r) {
      const ScaleEntry e = scale_r(oracle.branches(), r, oracle.tol());
      if (e.value > rate) return e.subset;
      if (r == 1) fallback = e;
    }
    return fallback.subset;
  }
  std::vector<std::size_t> best;
  double best_mass = -1.0;
  std::vector<std::size_t> best_single;
  double best_single_value = -1.0;
  for (std::size_t k = 1; k <= l; ++k) {
    std::vector<std::size_t> delta(k);
    for (std::size_t j = 0; j < k; ++j) delta[j] = j;
    do {
      const double t = oracle.threshold(delta);
      if (k == 1 && t > best_single_value) {
        best_single_value = t;
        best_single = delta;
      }
      const double m = oracle.mass(delta);
      if (t > rate && m > best_mass) {
        best_mass = m;
        best = delta;
      }
    } while (next_combination(delta, l));
  }
  return best.empty() ? best_single : best;
}

}  // namespace

ScaleOracle::ScaleOracle(BranchSet branches, MemoryLaw memory, double tol)
    : branches_(std::move(branches)), periodic_(std::holds_alternative<PeriodicMemory>(memory)), tol_(tol) {
  if (std::holds_alternative<MarkovMemory>(memory)) {
    throw ValidationError("simulation supports periodic and random memory only");
  }
  if (branches_.size() > kMaxScaleBranches) throw ResourceError("simulation supports at most 12 branches");
  if (periodic_) {
    probs_.assign(size(), 1.0 / static_cast<double>(size()));
  } else {
    probs_ = std::get<RandomMemory>(memory).q;
    // Reuse the memory-channel validation of q.
    MemoryChannel(branches_.branches(), memory);
  }
}

double ScaleOracle::threshold(std::span<const std::size_t> subset) const {
  std::vector<std::size_t> key(subset.begin(), subset.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double v = periodic_ ? subset_scale_value(branches_, subset, tol_) : branches_.sup_min(subset, tol_).value;
  cache_.emplace(std::move(key), v);
  return v;
}

double ScaleOracle::mass(std::span<const std::size_t> subset) const {
  double m = 0.0;
  for (std::size_t i : subset) m += probs_.at(i);
  return m;
}

std::vector<bool> success_oracle(const ScaleOracle& oracle, const Strategy& strategy) {
  check_strategy(oracle, strategy);
  const double t = oracle.threshold(strategy.target_subset);
  if (std::abs(strategy.rate - t) <= kRateTieTol) {
    throw IndeterminateRateError("rate coincides with the subset threshold; perturb the rate");
  }
  std::vector<bool> ok(oracle.size(), false);
  if (strategy.rate < t) {
    for (std::size_t i : strategy.target_subset) ok[i] = true;
  }
  return ok;
}

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

std::size_t draw_branch(std::span<const double> probabilities, std::uint64_t key) {
  const double u = unit_interval(splitmix64(key));
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    last = i;
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return last;
}

TrialRun run_trials(const ScaleOracle& oracle, const Strategy& strategy, std::size_t n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw ValidationError("n_trials must be at least 1");
  const auto ok = success_oracle(oracle, strategy);
  const auto& probs = oracle.branch_probabilities();
  const std::size_t l = oracle.size();

  TrialRun run{};
  run.records.reserve(n_trials);
  std::vector<std::size_t> drawn(l, 0);
  std::vector<std::size_t> failed(l, 0);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    const std::size_t b = draw_branch(probs, key);
    const bool success = ok[b];
    ++drawn[b];
    if (!success) {
      ++failed[b];
      ++failures;
    }
    run.records.push_back({b, success, key});
  }
  run.empirical_error = static_cast<double>(failures) / static_cast<double>(n_trials);
  run.max_branch_error = 0.0;
  run.average_branch_error = 0.0;
  run.theoretical_error = 1.0;
  for (std::size_t i = 0; i < l; ++i) {
    double e = ok[i] ? 0.0 : 1.0;
    if (drawn[i] > 0) {
      e = static_cast<double>(failed[i]) / static_cast<double>(drawn[i]);
      run.max_branch_error = std::max(run.max_branch_error, e);
    }
    run.average_branch_error += probs[i] * e;
    if (ok[i]) run.theoretical_error -= probs[i];
  }
  run.theoretical_error = std::max(0.0, run.theoretical_error);
  return run;
}

std::vector<StaircaseSample> empirical_staircase(const ScaleOracle& oracle, std::span<const double> rates,
                                                 std::size_t n_trials, std::uint64_t seed) {
  if (!std::is_sorted(rates.begin(), rates.end())) throw ValidationError("rates must be sorted ascending");
  std::vector<StaircaseSample> rows;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    const Strategy s{choose_subset(oracle, rates[j]), rates[j]};
    const std::uint64_t row_seed = splitmix64(seed + j);
    const TrialRun run = run_trials(oracle, s, n_trials, row_seed);
    rows.push_back({rates[j], s.target_subset, oracle.mass(s.target_subset), run.theoretical_error,
                    run.empirical_error, n_trials, row_seed});
  }
  return rows;
}

std::string to_csv(std::span<const StaircaseSample> rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "rate_bits,subset,q_subset,theoretical_error,empirical_error,n_trials,seed\n";
  for (const auto& r : rows) {
    out << format_number(r.rate) << ',' << format_subset(r.subset) << ',' << format_number(r.q_subset) << ','
        << format_number(r.theoretical_error) << ',' << format_number(r.empirical_error) << ',' << r.n_trials << ','
        << r.seed << '\n';
  }
  return out.str();
}

}  // namespace memcap
