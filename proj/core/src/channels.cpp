#include "memcap/channels.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "memcap/errors.hpp"

namespace memcap {

namespace {

constexpr double kProbabilityTol = 1e-10;
constexpr double kStationaryTol = 1e-8;

void check_unit_parameter(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

void check_distribution(const std::vector<double>& p, std::size_t expected, const char* what) {
  if (p.size() != expected) {
    throw ValidationError(std::string(what) + " has " + std::to_string(p.size()) +
                          " entries, expected " + std::to_string(expected));
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilityTol) {
    throw ValidationError(std::string(what) + " sums to " + std::to_string(sum) + ", expected 1");
  }
}

// Applies sum_j (I (x) K_j (x) I) rho (...)^H with K acting on qubit `site`.
ComplexMatrix apply_local(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                          std::size_t site, std::size_t n) {
  const std::size_t dim = rho.dim();
  const std::size_t shift = n - 1 - site;  // qubit 0 is the most significant bit
  const std::size_t mask = std::size_t{1} << shift;
  ComplexMatrix out(dim);
  ComplexMatrix tmp(dim);
  for (const ComplexMatrix& k : kraus) {
    // tmp = (K on site) * rho
    for (std::size_t r = 0; r < dim; ++r) {
      const std::size_t br = (r & mask) ? 1 : 0;
      const std::size_t r0 = r & ~mask;
      for (std::size_t c = 0; c < dim; ++c) {
        tmp(r, c) = k(br, 0) * rho(r0, c) + k(br, 1) * rho(r0 | mask, c);
      }
    }
    // out += tmp * (K on site)^H
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        const std::size_t bc = (c & mask) ? 1 : 0;
        const std::size_t c0 = c & ~mask;
        out(r, c) += tmp(r, c0) * std::conj(k(bc, 0)) + tmp(r, c0 | mask) * std::conj(k(bc, 1));
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::amplitude_damping: return "amplitude_damping";
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::kraus: return "kraus";
  }
  return "unknown";
}

QubitChannel::QubitChannel(ChannelKind kind, double parameter, std::vector<ComplexMatrix> ops)
    : kind_(kind), parameter_(parameter), kraus_(std::move(ops)) {}

QubitChannel QubitChannel::amplitude_damping(double gamma) {
  check_unit_parameter(gamma, "gamma");
  std::vector<ComplexMatrix> ops{
      ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}},
      ComplexMatrix{{0.0, std::sqrt(gamma)}, {0.0, 0.0}},
  };
  return QubitChannel(ChannelKind::amplitude_damping, gamma, std::move(ops));
}

QubitChannel QubitChannel::depolarizing(double p) {
  check_unit_parameter(p, "p");
  const double w0 = std::sqrt(1.0 - 0.75 * p);
  const double w = std::sqrt(0.25 * p);
  const Complex i{0.0, 1.0};
  std::vector<ComplexMatrix> ops{
      ComplexMatrix{{w0, 0.0}, {0.0, w0}},
      ComplexMatrix{{0.0, w}, {w, 0.0}},
      ComplexMatrix{{0.0, -i * w}, {i * w, 0.0}},
      ComplexMatrix{{w, 0.0}, {0.0, -w}},
  };
  return QubitChannel(ChannelKind::depolarizing, p, std::move(ops));
}

QubitChannel QubitChannel::from_kraus(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) throw ValidationError("Kraus channel needs at least one operator");
  for (const auto& k : ops) {
    if (k.dim() != 2) throw ValidationError("Kraus operators must be 2x2");
    if (!k.is_finite()) throw ValidationError("Kraus operator has non-finite entries");
  }
  check_completeness(ops);
  return QubitChannel(ChannelKind::kraus, std::numeric_limits<double>::quiet_NaN(), std::move(ops));
}

std::vector<ComplexMatrix> QubitChannel::kraus_operators() const { return kraus_; }

DensityMatrix QubitChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != 2) throw ValidationError("qubit channel expects a 2x2 density matrix");
  const double a = rho(0, 0).real();
  const Complex b = rho(0, 1);
  switch (kind_) {
    case ChannelKind::amplitude_damping: {
      const double g = parameter_;
      const Complex off = b * std::sqrt(1.0 - g);
      return DensityMatrix(ComplexMatrix{{a + (1.0 - a) * g, off},
                                         {std::conj(off), (1.0 - a) * (1.0 - g)}});
    }
    case ChannelKind::depolarizing: {
      const double p = parameter_;
      ComplexMatrix out = (1.0 - p) * rho.matrix();
      out(0, 0) += 0.5 * p;
      out(1, 1) += 0.5 * p;
      return DensityMatrix(std::move(out));
    }
    case ChannelKind::kraus: {
      ComplexMatrix out(2);
      for (const auto& k : kraus_) out += k * rho.matrix() * k.adjoint();
      return DensityMatrix(std::move(out));
    }
  }
  throw ValidationError("unknown channel kind");
}

void check_completeness(const std::vector<ComplexMatrix>& ops, double tol) {
  if (ops.empty()) throw ValidationError("empty Kraus list");
  ComplexMatrix sum(ops.front().dim());
  for (const auto& k : ops) sum += k.adjoint() * k;
  if (sum.max_abs_diff(ComplexMatrix::identity(sum.dim())) > tol) {
    throw ValidationError("Kraus operators violate completeness sum K^H K = I");
  }
}

DensityMatrix apply_qubit_channel(const QubitChannel& ch, const DensityMatrix& rho) { return ch.apply(rho); }

std::vector<ComplexMatrix> kraus_operators(const QubitChannel& ch) { return ch.kraus_operators(); }

std::string memory_kind_name(const MemoryLaw& law) {
  struct Visitor {
    std::string operator()(const PeriodicMemory&) const { return "periodic"; }
    std::string operator()(const RandomMemory&) const { return "random"; }
    std::string operator()(const MarkovMemory&) const { return "markov"; }
  };
  return std::visit(Visitor{}, law);
}

MemoryChannel::MemoryChannel(std::vector<QubitChannel> branches, MemoryLaw memory)
    : branches_(std::move(branches)), memory_(std::move(memory)) {
  const std::size_t l = branches_.size();
  if (l == 0) throw ValidationError("memory channel needs at least one branch");
  if (const auto* rnd = std::get_if<RandomMemory>(&memory_)) {
    check_distribution(rnd->q, l, "q");
  } else if (const auto* mk = std::get_if<MarkovMemory>(&memory_)) {
    if (mk->transition.size() != l) throw ValidationError("transition matrix must be L x L");
    for (const auto& row : mk->transition) check_distribution(row, l, "transition row");
    check_distribution(mk->stationary, l, "lambda");
    for (std::size_t j = 0; j < l; ++j) {
      double flow = 0.0;
      for (std::size_t i = 0; i < l; ++i) flow += mk->stationary[i] * mk->transition[i][j];
      if (std::abs(flow - mk->stationary[j]) > kStationaryTol) {
        throw ValidationError("lambda is not invariant under the transition matrix");
      }
    }
  }
}

std::vector<double> MemoryChannel::branch_probabilities() const {
  if (const auto* rnd = std::get_if<RandomMemory>(&memory_)) return rnd->q;
  if (const auto* mk = std::get_if<MarkovMemory>(&memory_)) return mk->stationary;
  return std::vector<double>(size(), 1.0 / static_cast<double>(size()));
}

std::vector<BranchSequence> branch_sequences(const MemoryChannel& mc, std::size_t n) {
  if (n == 0 || n > kMaxMemoryBlock) throw ValidationError("block length n must be in [1, 4]");
  const std::size_t l = mc.size();
  std::vector<BranchSequence> out;
  const auto& law = mc.memory();
  if (std::holds_alternative<PeriodicMemory>(law)) {
    for (std::size_t start = 0; start < l; ++start) {
      BranchSequence seq{1.0 / static_cast<double>(l), {}};
      for (std::size_t k = 0; k < n; ++k) seq.branches.push_back((start + k) % l);
      out.push_back(std::move(seq));
    }
  } else if (const auto* rnd = std::get_if<RandomMemory>(&law)) {
    for (std::size_t i = 0; i < l; ++i) {
      if (rnd->q[i] == 0.0) continue;
      out.push_back({rnd->q[i], std::vector<std::size_t>(n, i)});
    }
  } else {
    const auto& mk = std::get<MarkovMemory>(law);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) total *= l;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> idx(n);
      std::size_t rest = code;
      for (std::size_t k = n; k-- > 0;) {
        idx[k] = rest % l;
        rest /= l;
      }
      double w = mk.stationary[idx[0]];
      for (std::size_t k = 0; k + 1 < n && w != 0.0; ++k) w *= mk.transition[idx[k]][idx[k + 1]];
      if (w != 0.0) out.push_back({w, std::move(idx)});
    }
  }
  return out;
}

DensityMatrix apply_product_channel(const std::vector<QubitChannel>& maps, const DensityMatrix& rho) {
  const std::size_t n = maps.size();
  if (n == 0 || n > kMaxMemoryBlock) throw ValidationError("block length n must be in [1, 4]");
  if (rho.dim() != (std::size_t{1} << n)) throw ValidationError("state dimension must be 2^n");
  ComplexMatrix cur = rho.matrix();
  for (std::size_t site = 0; site < n; ++site) cur = apply_local(cur, maps[site].kraus_operators(), site, n);
  return DensityMatrix(std::move(cur));
}

DensityMatrix apply_memory_channel_n(const MemoryChannel& mc, const DensityMatrix& rho, std::size_t n) {
  if (n == 0 || n > kMaxMemoryBlock) throw ValidationError("block length n must be in [1, 4]");
  if (rho.dim() != (std::size_t{1} << n)) {
    throw ValidationError("state dimension " + std::to_string(rho.dim()) + " does not match 2^" + std::to_string(n));
  }
  ComplexMatrix out(rho.dim());
  for (const auto& seq : branch_sequences(mc, n)) {
    std::vector<QubitChannel> maps;
    maps.reserve(n);
    for (std::size_t i : seq.branches) maps.push_back(mc.branches()[i]);
    out += seq.weight * apply_product_channel(maps, rho).matrix();
  }
  return DensityMatrix(std::move(out));
}

}  // namespace memcap
