#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "memcap/channels.hpp"
#include "memcap/scales.hpp"

namespace memcap {

/// Rates within this distance of a capacity threshold are rejected.
inline constexpr double kRateTieTol = 1e-12;

/// A code family aimed at a set of branches (periodic offsets or random
/// branch ids) at a rate in bits per channel use.
struct Strategy {
  std::vector<std::size_t> target_subset;
  double rate;
};

struct TrialRecord {
  std::size_t drawn_branch;
  bool success;
  /// Per-trial key; draw_branch(key) reproduces drawn_branch.
  std::uint64_t seed;
};

/// Idealised asymptotic decoder for a periodic or random memory channel.
///
/// A branch is decoded correctly exactly when it belongs to the strategy's
/// subset and the rate lies below that subset's capacity threshold:
/// the subset scale value (periodic) or sup_P min over the subset (random).
/// Branch identification is assumed free and perfect.
class ScaleOracle {
 public:
  /// Markov memory laws are rejected with ValidationError.
  ScaleOracle(BranchSet branches, MemoryLaw memory, double tol = kDefaultTol);

  std::size_t size() const { return branches_.size(); }
  bool periodic() const { return periodic_; }
  const BranchSet& branches() const { return branches_; }
  const std::vector<double>& branch_probabilities() const { return probs_; }
  double tol() const { return tol_; }

  /// Rate threshold of a subset (memoised).
  double threshold(std::span<const std::size_t> subset) const;
  /// Probability mass of a subset under the branch law.
  double mass(std::span<const std::size_t> subset) const;

 private:
  BranchSet branches_;
  bool periodic_;
  std::vector<double> probs_;
  double tol_;
  mutable std::map<std::vector<std::size_t>, double> cache_;
};

/// Per-branch decode success. Throws IndeterminateRateError when the rate is
/// within 1e-12 of the subset threshold.
std::vector<bool> success_oracle(const ScaleOracle& oracle, const Strategy& strategy);

/// Counter-based branch draw for one trial key.
std::size_t draw_branch(std::span<const double> probabilities, std::uint64_t key);
/// Key of trial `index` in a run seeded with `seed`.
std::uint64_t trial_key(std::uint64_t seed, std::uint64_t index);

struct TrialRun {
  /// Fraction of failed trials.
  double empirical_error;
  /// Largest failure fraction among branches that were drawn.
  double max_branch_error;
  /// sum_i q_i e_i with e_i the per-branch failure fraction (oracle value for
  /// branches never drawn).
  double average_branch_error;
  /// 1 - mass of the successful branches.
  double theoretical_error;
  std::vector<TrialRecord> records;
};

TrialRun run_trials(const ScaleOracle& oracle, const Strategy& strategy, std::size_t n_trials, std::uint64_t seed);

struct StaircaseSample {
  double rate;
  std::vector<std::size_t> subset;
  double q_subset;
  double theoretical_error;
  double empirical_error;
  std::size_t n_trials;
  std::uint64_t seed;
};

/// Picks, for each rate, the subset with the largest mass whose threshold
/// exceeds the rate (periodic: largest r with C_p^(r) > rate), then runs
/// trials. When no subset qualifies, the r = 1 best subset (periodic) or the
/// best singleton (random) is used and every trial fails. Rates must be
/// sorted ascending.
std::vector<StaircaseSample> empirical_staircase(const ScaleOracle& oracle, std::span<const double> rates,
                                                 std::size_t n_trials, std::uint64_t seed);

/// Columns rate_bits,subset,q_subset,theoretical_error,empirical_error,n_trials,seed.
std::string to_csv(std::span<const StaircaseSample> rows);

}  // namespace memcap
