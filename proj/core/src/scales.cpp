#include "memcap/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "memcap/errors.hpp"
#include "memcap/holevo.hpp"

namespace memcap {

namespace {

constexpr double kProbabilityTol = 1e-10;

std::vector<QubitChannel> ad_channels(std::span<const double> gammas) {
  std::vector<QubitChannel> out;
  out.reserve(gammas.size());
  for (double g : gammas) out.push_back(QubitChannel::amplitude_damping(g));
  return out;
}

void check_indices(std::span<const std::size_t> idx, std::size_t size) {
  if (idx.empty()) throw ValidationError("branch index list must be nonempty");
  for (std::size_t i : idx) {
    if (i >= size) throw ValidationError("branch index " + std::to_string(i) + " out of range");
  }
}

void check_subset(std::span<const std::size_t> subset, std::size_t size) {
  check_indices(subset, size);
  for (std::size_t k = 1; k < subset.size(); ++k) {
    if (subset[k] <= subset[k - 1]) throw ValidationError("subset must be strictly increasing");
  }
}

void check_branch_count(const BranchSet& set) {
  if (set.size() > kMaxScaleBranches) {
    throw ResourceError("subset enumeration supports at most 12 branches, got " + std::to_string(set.size()));
  }
}

// Multiplicity of each branch among the indices.
std::vector<double> counts(std::span<const std::size_t> idx, std::size_t size) {
  std::vector<double> w(size, 0.0);
  for (std::size_t i : idx) w[i] += 1.0;
  return w;
}

// sup_P sum_m I(P; Phi_{i_m + k}) for every shift k, memoised on the sorted
// branch multiset since different (subset, k) pairs often coincide.
class ShiftSums {
 public:
  ShiftSums(const BranchSet& set, double tol) : set_(set), tol_(tol) {}

  double sum_over_shifts(std::span<const std::size_t> subset) {
    const std::size_t l = set_.size();
    double total = 0.0;
    std::vector<std::size_t> shifted(subset.size());
    for (std::size_t k = 0; k < l; ++k) {
      for (std::size_t m = 0; m < subset.size(); ++m) shifted[m] = (subset[m] + k) % l;
      std::sort(shifted.begin(), shifted.end());
      auto it = cache_.find(shifted);
      if (it == cache_.end()) it = cache_.emplace(shifted, set_.sup_sum(shifted, tol_).value).first;
      total += it->second;
    }
    return total;
  }

 private:
  const BranchSet& set_;
  double tol_;
  std::map<std::vector<std::size_t>, double> cache_;
};

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

ScaleEntry scale_r_cached(const BranchSet& set, std::size_t r, ShiftSums& sums) {
  const std::size_t l = set.size();
  if (r < 1 || r > l) {
    throw ValidationError("r must lie in [1, " + std::to_string(l) + "], got " + std::to_string(r));
  }
  std::vector<std::size_t> subset(r);
  for (std::size_t k = 0; k < r; ++k) subset[k] = k;
  ScaleEntry best{-std::numeric_limits<double>::infinity(), {}};
  do {
    const double v = sums.sum_over_shifts(subset) / static_cast<double>(r * l);
    if (v > best.value) best = {v, subset};
  } while (next_combination(subset, l));
  return best;
}

}  // namespace

BranchSet BranchSet::amplitude_damping(std::span<const double> gammas) { return BranchSet(ad_channels(gammas)); }

BranchSet::BranchSet(std::vector<QubitChannel> branches, int ensemble_grid)
    : branches_(std::move(branches)), closed_form_(true), grid_(ensemble_grid) {
  if (branches_.empty()) throw ValidationError("at least one branch is required");
  for (const auto& b : branches_) {
    if (b.kind() != ChannelKind::amplitude_damping) closed_form_ = false;
    gammas_.push_back(b.parameter());
  }
}

Supremum BranchSet::sup_sum(std::span<const std::size_t> branch_idx, double tol) const {
  check_indices(branch_idx, size());
  const auto w = counts(branch_idx, size());
  if (closed_form_) {
    const OptResult r = maximize_chi_sum(gammas_, w, tol);
    return {r.value, r.argmax};
  }
  const auto r = maximize_holevo_sum_on_grid(branches_, w, grid_);
  return {r.value, std::nullopt};
}

Supremum BranchSet::sup_min(std::span<const std::size_t> branch_idx, double tol) const {
  check_indices(branch_idx, size());
  std::vector<std::size_t> distinct(branch_idx.begin(), branch_idx.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (closed_form_) {
    std::vector<double> g;
    for (std::size_t i : distinct) g.push_back(gammas_[i]);
    const OptResult r = maximize_chi_min(g, tol);
    return {r.value, r.argmax};
  }
  std::vector<QubitChannel> chans;
  for (std::size_t i : distinct) chans.push_back(branches_[i]);
  const auto r = maximize_holevo_min_on_grid(chans, grid_);
  return {r.value, std::nullopt};
}

Supremum BranchSet::sup_single(std::size_t i, double tol) const {
  const std::size_t idx[] = {i};
  return sup_sum(idx, tol);
}

double capacity_periodic(const BranchSet& set, double tol) {
  std::vector<std::size_t> all(set.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return set.sup_sum(all, tol).value / static_cast<double>(set.size());
}

double capacity_periodic(std::span<const double> gammas, double tol) {
  return capacity_periodic(BranchSet::amplitude_damping(gammas), tol);
}

double cbar_periodic(const BranchSet& set, double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) sum += set.sup_single(i, tol).value;
  return sum / static_cast<double>(set.size());
}

double cbar_periodic(std::span<const double> gammas, double tol) {
  return cbar_periodic(BranchSet::amplitude_damping(gammas), tol);
}

double subset_scale_value(const BranchSet& set, std::span<const std::size_t> subset, double tol) {
  check_subset(subset, set.size());
  ShiftSums sums(set, tol);
  return sums.sum_over_shifts(subset) / static_cast<double>(subset.size() * set.size());
}

ScaleEntry scale_r(const BranchSet& set, std::size_t r, double tol) {
  check_branch_count(set);
  ShiftSums sums(set, tol);
  return scale_r_cached(set, r, sums);
}

ScaleEntry scale_r(std::span<const double> gammas, std::size_t r, double tol) {
  return scale_r(BranchSet::amplitude_damping(gammas), r, tol);
}

ScaleEntry pair_capacity(const BranchSet& set, double tol) {
  if (set.size() < 2) throw ValidationError("pair capacity needs at least two branches");
  return scale_r(set, 2, tol);
}

ScaleEntry pair_capacity(std::span<const double> gammas, double tol) {
  return pair_capacity(BranchSet::amplitude_damping(gammas), tol);
}

double chi_star_avg_pair(double gamma0, double gamma1, double tol) {
  return 0.5 * (chi_star(gamma0, tol).value + chi_star(gamma1, tol).value);
}

RandomScaleEntry random_scale(const BranchSet& set, std::span<const double> q, std::span<const std::size_t> delta,
                              double tol) {
  if (q.size() != set.size()) throw ValidationError("q must have one entry per branch");
  double total = 0.0;
  for (double x : q) {
    if (!(x >= 0.0)) throw ValidationError("q entries must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) throw ValidationError("q must sum to 1");
  if (delta.empty()) throw ValidationError("Delta must be a nonempty subset");
  check_subset(delta, set.size());
  RandomScaleEntry e{{delta.begin(), delta.end()}, 0.0, 0.0, 0.0};
  for (std::size_t i : delta) {
    e.q_delta += q[i];
    e.cbar_delta = std::max(e.cbar_delta, set.sup_single(i, tol).value);
  }
  e.c_delta = set.sup_min(delta, tol).value;
  return e;
}

RandomScaleEntry random_scale(std::span<const double> gammas, std::span<const double> q,
                              std::span<const std::size_t> delta, double tol) {
  return random_scale(BranchSet::amplitude_damping(gammas), q, delta, tol);
}

std::vector<StaircaseRow> staircase_profile(const BranchSet& set, double tol) {
  check_branch_count(set);
  const std::size_t l = set.size();
  ShiftSums sums(set, tol);
  std::vector<StaircaseRow> rows;
  for (std::size_t r = 1; r <= l; ++r) {
    const ScaleEntry e = scale_r_cached(set, r, sums);
    rows.push_back({r, e.value, 1.0 - static_cast<double>(r) / static_cast<double>(l), e.subset});
  }
  return rows;
}

CapacityReport capacity_report(const BranchSet& set, double tol) {
  check_branch_count(set);
  CapacityReport rep;
  rep.tol = tol;
  rep.method = set.closed_form() ? "mirror_pair_closed_form" : "grid_ensemble_search";
  rep.cp = capacity_periodic(set, tol);
  rep.cbar = cbar_periodic(set, tol);
  ShiftSums sums(set, tol);
  for (std::size_t r = 1; r <= set.size(); ++r) rep.scale.emplace(r, scale_r_cached(set, r, sums));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Supremum s = set.sup_single(i, tol);
    rep.per_branch_suprema.push_back({s.a_max, s.value});
  }
  return rep;
}

RandomScaleReport random_scale_report(const BranchSet& set, std::span<const double> q, double tol) {
  check_branch_count(set);
  RandomScaleReport rep;
  rep.tol = tol;
  rep.method = set.closed_form() ? "mirror_pair_closed_form" : "grid_ensemble_search";
  for (std::size_t k = 1; k <= set.size(); ++k) {
    std::vector<std::size_t> delta(k);
    for (std::size_t j = 0; j < k; ++j) delta[j] = j;
    do {
      rep.per_subset.push_back(random_scale(set, q, delta, tol));
    } while (next_combination(delta, set.size()));
  }
  return rep;
}

}  // namespace memcap
