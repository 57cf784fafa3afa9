#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "memcap/linalg.hpp"

namespace memcap {

inline constexpr double kCompletenessTol = 1e-10;
inline constexpr std::size_t kMaxMemoryBlock = 4;

enum class ChannelKind { amplitude_damping, depolarizing, kraus };

std::string to_string(ChannelKind kind);

/// Completely positive trace-preserving qubit map.
///
/// Amplitude damping and depolarizing channels keep their scalar parameter so
/// that closed forms stay available; every kind exposes a Kraus representation.
class QubitChannel {
 public:
  static QubitChannel amplitude_damping(double gamma);
  /// rho -> (1 - p) rho + p I / 2.
  static QubitChannel depolarizing(double p);
  /// Throws ValidationError unless sum K^H K = I within 1e-10.
  static QubitChannel from_kraus(std::vector<ComplexMatrix> ops);

  ChannelKind kind() const { return kind_; }
  /// gamma for amplitude damping, p for depolarizing, NaN for Kraus.
  double parameter() const { return parameter_; }

  std::vector<ComplexMatrix> kraus_operators() const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  QubitChannel(ChannelKind kind, double parameter, std::vector<ComplexMatrix> ops);

  ChannelKind kind_;
  double parameter_;
  std::vector<ComplexMatrix> kraus_;
};

/// Validates sum K^H K = I; throws ValidationError otherwise.
void check_completeness(const std::vector<ComplexMatrix>& ops, double tol = kCompletenessTol);

DensityMatrix apply_qubit_channel(const QubitChannel& ch, const DensityMatrix& rho);
std::vector<ComplexMatrix> kraus_operators(const QubitChannel& ch);

/// Branch sequence applied cyclically with a uniformly random start.
struct PeriodicMemory {};

/// One branch drawn with probability q[i] and applied to every letter.
struct RandomMemory {
  std::vector<double> q;
};

/// Markov chain over branches: transition[i][j] = Pr(next = j | current = i).
struct MarkovMemory {
  std::vector<std::vector<double>> transition;
  std::vector<double> stationary;
};

using MemoryLaw = std::variant<PeriodicMemory, RandomMemory, MarkovMemory>;

std::string memory_kind_name(const MemoryLaw& law);

/// L branch channels plus a classical memory law.
class MemoryChannel {
 public:
  /// Throws ValidationError on empty branches or an inconsistent memory law.
  MemoryChannel(std::vector<QubitChannel> branches, MemoryLaw memory);

  std::size_t size() const { return branches_.size(); }
  const std::vector<QubitChannel>& branches() const { return branches_; }
  const MemoryLaw& memory() const { return memory_; }

  /// Probability of each branch being selected for a whole message.
  /// Periodic: uniform start offsets. Random: q. Markov: the stationary law.
  std::vector<double> branch_probabilities() const;

 private:
  std::vector<QubitChannel> branches_;
  MemoryLaw memory_;
};

/// One weighted branch sequence (i_0, ..., i_{n-1}) of the memory average.
struct BranchSequence {
  double weight;
  std::vector<std::size_t> branches;
};

/// All branch sequences of length n with nonzero weight.
std::vector<BranchSequence> branch_sequences(const MemoryChannel& mc, std::size_t n);

/// Applies Phi_{i_0} (x) ... (x) Phi_{i_{n-1}} to an n-qubit state.
DensityMatrix apply_product_channel(const std::vector<QubitChannel>& maps,
                                    const DensityMatrix& rho);

/// The n-letter action of a memory channel, n <= 4.
DensityMatrix apply_memory_channel_n(const MemoryChannel& mc, const DensityMatrix& rho, std::size_t n);

}  // namespace memcap
