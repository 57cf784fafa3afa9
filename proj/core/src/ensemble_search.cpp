#include "memcap/ensemble_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "memcap/errors.hpp"
#include "memcap/linalg.hpp"

namespace memcap {

namespace {

using Bloch = std::array<double, 3>;

// Output Bloch vectors and entropies of one channel on every grid state.
struct OutputTable {
  std::vector<Bloch> bloch;
  std::vector<double> entropy;
};

Bloch bloch_of(const DensityMatrix& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

double norm3(const Bloch& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

OutputTable tabulate(const QubitChannel& ch, const PureStateGrid& grid) {
  OutputTable t;
  t.bloch.reserve(grid.size());
  t.entropy.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const DensityMatrix out = ch.apply(grid.state(k));
    t.bloch.push_back(bloch_of(out));
    t.entropy.push_back(von_neumann_entropy(out));
  }
  return t;
}

std::vector<OutputTable> tabulate_all(std::span<const QubitChannel> channels, const PureStateGrid& grid) {
  std::vector<OutputTable> tables;
  tables.reserve(channels.size());
  for (const auto& ch : channels) tables.push_back(tabulate(ch, grid));
  return tables;
}

// D(sigma_x || avg) in bits for every candidate, sigma_x given by Bloch vectors.
void divergences(const OutputTable& t, std::span<const std::size_t> idx, std::span<const double> p,
                 std::vector<double>& out) {
  Bloch avg{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Bloch& r = t.bloch[idx[j]];
    for (int c = 0; c < 3; ++c) avg[c] += p[j] * r[c];
  }
  const double len = std::min(1.0, norm3(avg));
  const double log_plus = std::log2(0.5 * (1.0 + len));
  const double minus = 0.5 * (1.0 - len);
  const double log_minus = std::log2(std::max(minus, std::numeric_limits<double>::min()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Bloch& r = t.bloch[idx[j]];
    double cos_angle = 0.0;
    if (len > 0.0) cos_angle = (r[0] * avg[0] + r[1] * avg[1] + r[2] * avg[2]) / len;
    cos_angle = std::clamp(cos_angle, -1.0, 1.0);
    const double w_plus = 0.5 * (1.0 + cos_angle);
    const double w_minus = 0.5 * (1.0 - cos_angle);
    const double cross = (len > 0.0) ? w_plus * log_plus + (w_minus > 0.0 ? w_minus * log_minus : 0.0) : -1.0;
    out[j] = -t.entropy[idx[j]] - cross;
  }
}

struct BaOutcome {
  double value;
  double upper;
  int iterations;
  std::vector<double> p;
};

// Blahut-Arimoto for sum_i w_i I(p; Phi_i) restricted to candidates idx.
BaOutcome blahut_arimoto(const std::vector<OutputTable>& tables, std::span<const double> weights,
                         std::span<const std::size_t> idx, std::vector<double> p, const GridSearchOptions& opts) {
  const std::size_t n = idx.size();
  double total_w = 0.0;
  for (double w : weights) total_w += w;
  std::vector<double> g(n);
  std::vector<double> d(n);
  BaOutcome best{0.0, std::numeric_limits<double>::infinity(), 0, p};
  if (total_w <= 0.0) {
    best.upper = 0.0;
    return best;
  }
  for (int it = 0;; ++it) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (weights[i] == 0.0) continue;
      divergences(tables[i], idx, p, d);
      for (std::size_t j = 0; j < n; ++j) g[j] += weights[i] * d[j];
    }
    double f = 0.0;
    double g_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      f += p[j] * g[j];
      g_max = std::max(g_max, g[j]);
    }
    if (!std::isfinite(f) || !std::isfinite(g_max)) throw NumericalError("ensemble search produced non-finite values");
    best.upper = std::min(best.upper, g_max);
    if (f >= best.value || it == 0) {
      best.value = f;
      best.p = p;
    }
    best.iterations = it;
    if (g_max - f <= opts.gap_tol || it >= opts.max_iterations) break;
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      p[j] *= std::exp2((g[j] - g_max) / total_w);
      z += p[j];
    }
    for (double& x : p) x /= z;
  }
  best.upper = std::max(best.upper, best.value);
  return best;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  return idx;
}

GridEnsembleResult to_result(const BaOutcome& ba, std::span<const std::size_t> idx) {
  GridEnsembleResult r;
  r.value = ba.value;
  r.upper_bound = ba.upper;
  r.iterations = ba.iterations;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (ba.p[j] > 0.0) {
      r.support.push_back(idx[j]);
      r.probabilities.push_back(ba.p[j]);
    }
  }
  return r;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

// Advances idx to the next k-combination of {0..n-1} in lexicographic order.
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

double min_holevo(const std::vector<OutputTable>& tables, std::span<const std::size_t> idx, std::span<const double> p) {
  std::vector<double> d(idx.size());
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& t : tables) {
    divergences(t, idx, p, d);
    double chi = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) chi += p[j] * d[j];
    worst = std::min(worst, chi);
  }
  return worst;
}

constexpr double kInvPhi = 0.6180339887498948482;

// Golden-section minimisation of a convex function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (hi - lo <= tol) return f(0.5 * (lo + hi));
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return std::min({fc, fd, f(lo), f(hi)});
}

}  // namespace

PureStateGrid::PureStateGrid(int grid) : grid_(grid) {
  if (grid < 2) throw ValidationError("state grid resolution must be at least 2");
  const double pi = std::numbers::pi;
  for (int j = 0; j < grid; ++j) {
    const double theta = pi * j / (grid - 1);
    const bool pole = (j == 0 || j == grid - 1);
    const int n_phi = pole ? 1 : grid;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * pi * k / grid;
      const Complex psi[] = {std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)};
      states_.push_back(DensityMatrix::pure(psi));
    }
  }
}

Ensemble GridEnsembleResult::ensemble(const PureStateGrid& grid) const {
  std::vector<EnsembleItem> items;
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  for (std::size_t j = 0; j < support.size(); ++j) items.push_back({probabilities[j] / sum, grid.state(support[j])});
  return Ensemble(std::move(items));
}

GridEnsembleResult maximize_holevo_sum_on_grid(std::span<const QubitChannel> channels, std::span<const double> weights,
                                               const PureStateGrid& grid, const GridSearchOptions& opts) {
  if (channels.empty()) throw ValidationError("at least one channel is required");
  if (weights.size() != channels.size()) throw ValidationError("channels and weights differ in length");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
  }
  const auto tables = tabulate_all(channels, grid);
  const auto idx = all_indices(grid.size());
  std::vector<double> p(idx.size(), 1.0 / static_cast<double>(idx.size()));
  return to_result(blahut_arimoto(tables, weights, idx, std::move(p), opts), idx);
}

MaximinResult maximize_holevo_min_on_grid(std::span<const QubitChannel> channels, const PureStateGrid& grid,
                                          double weight_tol, const GridSearchOptions& opts) {
  const std::size_t m = channels.size();
  if (m == 0) throw ValidationError("at least one channel is required");
  if (m > kMaxMaximinBranches) throw ResourceError("maximin search supports at most four channels");
  if (!(weight_tol > 0.0)) throw ValidationError("weight tolerance must be positive");
  const auto tables = tabulate_all(channels, grid);
  const auto idx = all_indices(grid.size());
  const std::vector<double> uniform(idx.size(), 1.0 / static_cast<double>(idx.size()));

  MaximinResult result;
  result.value = 0.0;
  result.upper_bound = std::numeric_limits<double>::infinity();
  std::vector<double> w(m, 0.0);

  // Neighbouring weight vectors have nearby optima, so each solve starts from
  // a mixture of the previous optimum and the uniform distribution.
  std::vector<double> warm = uniform;
  auto solve_at = [&](const std::vector<double>& weights) {
    std::vector<double> start(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) start[j] = 0.9 * warm[j] + 0.1 * uniform[j];
    const BaOutcome ba = blahut_arimoto(tables, weights, idx, std::move(start), opts);
    warm = ba.p;
    ++result.inner_solves;
    result.value = std::max(result.value, min_holevo(tables, idx, ba.p));
    result.upper_bound = std::min(result.upper_bound, ba.upper);
    return ba.upper;
  };

  // Coordinate k ranges over [0, remaining]; the last coordinate takes the rest.
  std::function<double(std::size_t, double)> outer = [&](std::size_t k, double remaining) -> double {
    if (k + 1 == m) {
      w[k] = remaining;
      return solve_at(w);
    }
    auto f = [&](double wk) {
      w[k] = wk;
      return outer(k + 1, remaining - wk);
    };
    return golden_min(f, 0.0, remaining, weight_tol);
  };
  outer(0, 1.0);
  result.upper_bound = std::max(result.upper_bound, result.value);
  return result;
}

BruteForceResult brute_force_ensemble_search(const QubitChannel& ch, int n_states, int grid, std::uint64_t budget) {
  if (grid < 8) throw ValidationError("brute-force grid must be at least 8");
  if (n_states < 1) throw ValidationError("n_states must be positive");
  const PureStateGrid states(grid);
  const QubitChannel channels[] = {ch};
  const double weights[] = {1.0};
  const auto tables = tabulate_all(channels, states);
  GridSearchOptions opts;
  opts.gap_tol = 1e-9;

  if (n_states >= 4) {
    if (states.size() > budget) throw ResourceError("grid exceeds the search budget");
    const auto idx = all_indices(states.size());
    std::vector<double> p(idx.size(), 1.0 / static_cast<double>(idx.size()));
    const auto r = to_result(blahut_arimoto(tables, weights, idx, std::move(p), opts), idx);
    return {r.value, r.ensemble(states)};
  }

  const auto k = static_cast<std::size_t>(n_states);
  const std::uint64_t count = binomial_capped(states.size(), k, budget);
  if (count > budget) {
    throw ResourceError("brute-force search over " + std::to_string(n_states) + "-subsets of " +
                        std::to_string(states.size()) + " states exceeds the budget of " + std::to_string(budget));
  }
  std::vector<std::size_t> idx = all_indices(k);
  GridEnsembleResult best;
  bool have = false;
  do {
    std::vector<double> p(k, 1.0 / static_cast<double>(k));
    const BaOutcome ba = blahut_arimoto(tables, weights, idx, std::move(p), opts);
    if (!have || ba.value > best.value) {
      best = to_result(ba, idx);
      have = true;
    }
  } while (next_combination(idx, states.size()));
  return {best.value, best.ensemble(states)};
}

}  // namespace memcap
