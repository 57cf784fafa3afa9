#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memcap/channels.hpp"
#include "memcap/ensemble_search.hpp"
#include "memcap/optim.hpp"

namespace memcap {

inline constexpr std::size_t kMaxScaleBranches = 12;

/// sup over input ensembles of a combination of branch Holevo quantities.
struct Supremum {
  double value;
  /// Maximising mirror parameter; empty on the generic ensemble path.
  std::optional<double> a_max;
};

/// The branches of a memory channel, with the solver used for their suprema.
///
/// All-amplitude-damping sets use the mirror-pair closed forms. Any other
/// branch kind switches the whole set to the grid ensemble search, which is
/// accurate to roughly 1e-3 bits for generic channels.
class BranchSet {
 public:
  static BranchSet amplitude_damping(std::span<const double> gammas);
  explicit BranchSet(std::vector<QubitChannel> branches, int ensemble_grid = 24);

  std::size_t size() const { return branches_.size(); }
  bool closed_form() const { return closed_form_; }
  const std::vector<QubitChannel>& branches() const { return branches_; }
  int ensemble_grid() const { return grid_.resolution(); }

  /// sup_P sum_m I(P; Phi_{branch[m]}); indices may repeat.
  Supremum sup_sum(std::span<const std::size_t> branch_idx, double tol = kDefaultTol) const;
  /// sup_P min_m I(P; Phi_{branch[m]}).
  Supremum sup_min(std::span<const std::size_t> branch_idx, double tol = kDefaultTol) const;
  /// sup_P I(P; Phi_i).
  Supremum sup_single(std::size_t i, double tol = kDefaultTol) const;

 private:
  std::vector<QubitChannel> branches_;
  std::vector<double> gammas_;
  bool closed_form_;
  PureStateGrid grid_;
};

/// (1/L) sup_P sum_i I(P; Phi_i).
double capacity_periodic(const BranchSet& set, double tol = kDefaultTol);
double capacity_periodic(std::span<const double> gammas, double tol = kDefaultTol);

/// (1/L) sum_i sup_P I(P; Phi_i).
double cbar_periodic(const BranchSet& set, double tol = kDefaultTol);
double cbar_periodic(std::span<const double> gammas, double tol = kDefaultTol);

struct ScaleEntry {
  double value;
  /// Sorted branch offsets attaining the maximum (first in lexicographic order).
  std::vector<std::size_t> subset;
};

/// (1/(rL)) sum_k sup_P sum_{m} I(P; Phi_{i_m + k mod L}) for one offset subset.
double subset_scale_value(const BranchSet& set, std::span<const std::size_t> subset, double tol = kDefaultTol);

/// C_p^(r): the maximum of subset_scale_value over all r-subsets of offsets.
/// r = 1 gives the average of single-branch suprema; r = L gives C_p.
ScaleEntry scale_r(const BranchSet& set, std::size_t r, double tol = kDefaultTol);
ScaleEntry scale_r(std::span<const double> gammas, std::size_t r, double tol = kDefaultTol);

ScaleEntry pair_capacity(const BranchSet& set, double tol = kDefaultTol);
ScaleEntry pair_capacity(std::span<const double> gammas, double tol = kDefaultTol);

/// (chi*(gamma0) + chi*(gamma1)) / 2.
double chi_star_avg_pair(double gamma0, double gamma1, double tol = kDefaultTol);

struct RandomScaleEntry {
  std::vector<std::size_t> delta;
  double q_delta;
  double c_delta;
  double cbar_delta;
};

/// q(Delta), sup_P min_{i in Delta} I and max_{i in Delta} sup_P I.
RandomScaleEntry random_scale(const BranchSet& set, std::span<const double> q, std::span<const std::size_t> delta,
                              double tol = kDefaultTol);
RandomScaleEntry random_scale(std::span<const double> gammas, std::span<const double> q,
                              std::span<const std::size_t> delta, double tol = kDefaultTol);

struct StaircaseRow {
  std::size_t r;
  double rate;
  /// Error level 1 - r/L above which rates below `rate` are achievable.
  double error_threshold;
  std::vector<std::size_t> subset;
};

std::vector<StaircaseRow> staircase_profile(const BranchSet& set, double tol = kDefaultTol);

struct BranchSupremum {
  std::optional<double> a_max;
  double chi_star;
};

struct CapacityReport {
  double cp;
  double cbar;
  /// r -> best scale entry, r = 1..L.
  std::map<std::size_t, ScaleEntry> scale;
  std::vector<BranchSupremum> per_branch_suprema;
  double tol;
  std::string method;
};

CapacityReport capacity_report(const BranchSet& set, double tol = kDefaultTol);

struct RandomScaleReport {
  /// Every nonempty subset, ordered by size and then lexicographically.
  std::vector<RandomScaleEntry> per_subset;
  double tol;
  std::string method;
};

RandomScaleReport random_scale_report(const BranchSet& set, std::span<const double> q, double tol = kDefaultTol);

/// JSON and CSV encodings. Numbers carry 12 significant digits.
std::string to_json(const CapacityReport& report);
std::string to_json(const RandomScaleReport& report);
/// Columns r,value_bits,subset,error_threshold; subsets as ';'-joined indices.
std::string to_csv(const CapacityReport& report);
/// Columns delta,q_delta,c_delta_bits,cbar_delta_bits.
std::string to_csv(const RandomScaleReport& report);

/// Shortest decimal with at most 12 significant digits, '.' separator.
std::string format_number(double v);
std::string format_subset(std::span<const std::size_t> subset);

}  // namespace memcap
