#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace memcap::cli {

enum class Command { chi, amax, capacity, scale, random_scale, appendix_a, staircase, simulate };

enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::capacity;
  /// Channel spec; not used by amax and appendix-a.
  std::string spec_path;
  double tol = 1e-8;
  /// Points per axis of the damping sweeps (amax, appendix-a).
  int grid = 101;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  /// Empty means standard output.
  std::string output;
  Format format = Format::csv;
  std::optional<std::size_t> r;
  std::optional<std::vector<std::size_t>> delta;
  std::optional<double> rate;
  std::optional<std::vector<std::size_t>> subset;
};

/// Throws ValidationError when tol or grid are out of range.
void validate(const RunConfig& config);

struct AppendixRow {
  double gamma0;
  double gamma1;
  double a_max;
  double cp;
  double a_max0;
  double a_max1;
  double chi_star_avg;
  double gap;
};

/// Two-branch periodic capacity against the averaged single-branch suprema on
/// the damping grid {0, step, ..., 1}.
std::vector<AppendixRow> cmd_appendix_a(int points, double tol);

/// Runs one command and writes the report. Returns the exit status.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memcap::cli
