#include "memcap_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "memcap/errors.hpp"
#include "memcap/optim.hpp"
#include "memcap/scales.hpp"
#include "memcap/simulate.hpp"
#include "memcap_cli/spec.hpp"

namespace memcap::cli {

namespace {

using nlohmann::ordered_json;

// Staircase rates sit this far below each threshold.
constexpr double kStaircaseOffset = 1e-6;

const std::map<std::string, Command> kCommands = {
    {"chi", Command::chi},
    {"amax", Command::amax},
    {"capacity", Command::capacity},
    {"scale", Command::scale},
    {"random-scale", Command::random_scale},
    {"appendix-a", Command::appendix_a},
    {"staircase", Command::staircase},
    {"simulate", Command::simulate},
};

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  const std::string s = format_number(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::ostringstream csv_stream() {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::size_t> parse_index_list(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ValidationError(flag + " expects comma-separated branch indices, got \"" + text + "\"");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

ChannelSpec require_spec(const RunConfig& c) {
  if (c.spec_path.empty()) throw ValidationError("this command needs a channel spec path");
  return load_channel_spec(c.spec_path);
}

BranchSet periodic_branches(const ChannelSpec& spec, const std::string& command) {
  if (!std::holds_alternative<PeriodicMemory>(spec.memory)) {
    throw ValidationError(command + " needs periodic memory, spec has " + memory_kind_name(spec.memory));
  }
  return BranchSet(spec.branches);
}

const std::vector<double>& random_q(const ChannelSpec& spec, const std::string& command) {
  if (!std::holds_alternative<RandomMemory>(spec.memory)) {
    throw ValidationError(command + " needs random memory, spec has " + memory_kind_name(spec.memory));
  }
  return std::get<RandomMemory>(spec.memory).q;
}

std::vector<double> damping_grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

std::string cmd_chi(const RunConfig& c) {
  const auto spec = require_spec(c);
  const BranchSet set(spec.branches);
  if (c.format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& b = set.branches()[i];
      const Supremum s = set.sup_single(i, c.tol);
      rows.push_back({{"branch", i},
                      {"type", to_string(b.kind())},
                      {"parameter", num(b.parameter())},
                      {"a_max", s.a_max ? num(*s.a_max) : ordered_json(nullptr)},
                      {"chi_star", num(s.value)}});
    }
    return dump({{"branches", rows}, {"tol", num(c.tol)}});
  }
  auto out = csv_stream();
  out << "branch,type,parameter,a_max,chi_star_bits\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& b = set.branches()[i];
    const Supremum s = set.sup_single(i, c.tol);
    out << i << ',' << to_string(b.kind()) << ',' << (std::isnan(b.parameter()) ? "" : format_number(b.parameter()))
        << ',' << (s.a_max ? format_number(*s.a_max) : "") << ',' << format_number(s.value) << '\n';
  }
  return out.str();
}

std::string cmd_amax(const RunConfig& c) {
  const auto gammas = damping_grid(c.grid);
  std::vector<OptResult> res;
  for (double g : gammas) res.push_back(chi_star(g, c.tol));
  if (c.format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      rows.push_back({{"gamma", num(gammas[i])}, {"a_max", num(res[i].argmax)}, {"chi_star", num(res[i].value)}});
    }
    return dump({{"rows", rows}, {"tol", num(c.tol)}});
  }
  auto out = csv_stream();
  out << "gamma,a_max,chi_star_bits\n";
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    out << format_number(gammas[i]) << ',' << format_number(res[i].argmax) << ',' << format_number(res[i].value) << '\n';
  }
  return out.str();
}

std::string cmd_capacity(const RunConfig& c) {
  const auto set = periodic_branches(require_spec(c), "capacity");
  const auto rep = capacity_report(set, c.tol);
  return c.format == Format::json ? to_json(rep) : to_csv(rep);
}

std::string cmd_scale(const RunConfig& c) {
  const auto set = periodic_branches(require_spec(c), "scale");
  const std::size_t l = set.size();
  std::vector<std::size_t> rs;
  if (c.r) {
    if (*c.r < 1 || *c.r > l) {
      throw ValidationError("--r must lie in [1, " + std::to_string(l) + "], got " + std::to_string(*c.r));
    }
    rs.push_back(*c.r);
  } else {
    for (std::size_t r = 1; r <= l; ++r) rs.push_back(r);
  }
  std::vector<ScaleEntry> entries;
  if (c.r) {
    entries.push_back(scale_r(set, *c.r, c.tol));
  } else {
    for (const auto& row : staircase_profile(set, c.tol)) entries.push_back({row.rate, row.subset});
  }
  if (c.format == Format::json) {
    ordered_json scale = ordered_json::object();
    for (std::size_t k = 0; k < rs.size(); ++k) {
      scale[std::to_string(rs[k])] = {{"value", num(entries[k].value)}, {"best_subset", entries[k].subset}};
    }
    return dump({{"L", l}, {"scale", scale}, {"tol", num(c.tol)}});
  }
  auto out = csv_stream();
  out << "r,value_bits,subset,error_threshold\n";
  for (std::size_t k = 0; k < rs.size(); ++k) {
    out << rs[k] << ',' << format_number(entries[k].value) << ',' << format_subset(entries[k].subset) << ','
        << format_number(1.0 - static_cast<double>(rs[k]) / static_cast<double>(l)) << '\n';
  }
  return out.str();
}

std::string cmd_random_scale(const RunConfig& c) {
  const auto spec = require_spec(c);
  const auto& q = random_q(spec, "random-scale");
  const BranchSet set(spec.branches);
  RandomScaleReport rep;
  if (c.delta) {
    rep.tol = c.tol;
    rep.method = set.closed_form() ? "mirror_pair_closed_form" : "grid_ensemble_search";
    rep.per_subset.push_back(random_scale(set, q, *c.delta, c.tol));
  } else {
    rep = random_scale_report(set, q, c.tol);
  }
  return c.format == Format::json ? to_json(rep) : to_csv(rep);
}

std::string cmd_appendix(const RunConfig& c) {
  const auto rows = cmd_appendix_a(c.grid, c.tol);
  if (c.format == Format::json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"gamma0", num(r.gamma0)},
                     {"gamma1", num(r.gamma1)},
                     {"a_max", num(r.a_max)},
                     {"cp", num(r.cp)},
                     {"a_max0", num(r.a_max0)},
                     {"a_max1", num(r.a_max1)},
                     {"chi_star_avg", num(r.chi_star_avg)},
                     {"gap", num(r.gap)}});
    }
    return dump({{"rows", arr}, {"tol", num(c.tol)}});
  }
  auto out = csv_stream();
  out << "gamma0,gamma1,a_max,cp,a_max0,a_max1,chi_star_avg,gap\n";
  for (const auto& r : rows) {
    out << format_number(r.gamma0) << ',' << format_number(r.gamma1) << ',' << format_number(r.a_max) << ','
        << format_number(r.cp) << ',' << format_number(r.a_max0) << ',' << format_number(r.a_max1) << ','
        << format_number(r.chi_star_avg) << ',' << format_number(r.gap) << '\n';
  }
  return out.str();
}

std::string samples_json(std::span<const StaircaseSample> rows, const RunConfig& c) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"rate", num(r.rate)},
                   {"subset", r.subset},
                   {"q_subset", num(r.q_subset)},
                   {"theoretical_error", num(r.theoretical_error)},
                   {"empirical_error", num(r.empirical_error)},
                   {"n_trials", r.n_trials},
                   {"seed", r.seed}});
  }
  return dump({{"rows", arr}, {"seed", c.seed}});
}

ScaleOracle make_oracle(const RunConfig& c) {
  const auto spec = require_spec(c);
  return ScaleOracle(BranchSet(spec.branches), spec.memory, c.tol);
}

std::string cmd_staircase(const RunConfig& c) {
  const auto oracle = make_oracle(c);
  std::vector<double> thresholds;
  if (oracle.periodic()) {
    for (const auto& row : staircase_profile(oracle.branches(), c.tol)) thresholds.push_back(row.rate);
  } else {
    const auto rep = random_scale_report(oracle.branches(), oracle.branch_probabilities(), c.tol);
    for (const auto& e : rep.per_subset) thresholds.push_back(e.c_delta);
  }
  std::sort(thresholds.begin(), thresholds.end());
  std::vector<double> rates;
  for (double t : thresholds) {
    const double rate = std::max(0.0, t - kStaircaseOffset);
    if (rates.empty() || rate - rates.back() > kStaircaseOffset) rates.push_back(rate);
  }
  rates.push_back(thresholds.back() + 1e3 * kStaircaseOffset);
  const auto rows = empirical_staircase(oracle, rates, c.trials, c.seed);
  return c.format == Format::json ? samples_json(rows, c) : to_csv(rows);
}

std::string cmd_simulate(const RunConfig& c) {
  if (!c.rate) throw ValidationError("simulate needs --rate");
  if (!c.subset) throw ValidationError("simulate needs --subset");
  const auto oracle = make_oracle(c);
  const Strategy s{*c.subset, *c.rate};
  const auto run = run_trials(oracle, s, c.trials, c.seed);
  const double threshold = oracle.threshold(s.target_subset);
  if (c.format == Format::json) {
    return dump({{"rate", num(s.rate)},
                 {"subset", s.target_subset},
                 {"threshold", num(threshold)},
                 {"q_subset", num(oracle.mass(s.target_subset))},
                 {"theoretical_error", num(run.theoretical_error)},
                 {"empirical_error", num(run.empirical_error)},
                 {"max_branch_error", num(run.max_branch_error)},
                 {"average_branch_error", num(run.average_branch_error)},
                 {"n_trials", c.trials},
                 {"seed", c.seed}});
  }
  auto out = csv_stream();
  out << "rate_bits,subset,threshold_bits,q_subset,theoretical_error,empirical_error,max_branch_error,"
         "average_branch_error,n_trials,seed\n";
  out << format_number(s.rate) << ',' << format_subset(s.target_subset) << ',' << format_number(threshold) << ','
      << format_number(oracle.mass(s.target_subset)) << ',' << format_number(run.theoretical_error) << ','
      << format_number(run.empirical_error) << ',' << format_number(run.max_branch_error) << ','
      << format_number(run.average_branch_error) << ',' << c.trials << ',' << c.seed << '\n';
  return out.str();
}

std::string execute(const RunConfig& c) {
  switch (c.command) {
    case Command::chi:
      return cmd_chi(c);
    case Command::amax:
      return cmd_amax(c);
    case Command::capacity:
      return cmd_capacity(c);
    case Command::scale:
      return cmd_scale(c);
    case Command::random_scale:
      return cmd_random_scale(c);
    case Command::appendix_a:
      return cmd_appendix(c);
    case Command::staircase:
      return cmd_staircase(c);
    case Command::simulate:
      return cmd_simulate(c);
  }
  throw ValidationError("unknown command");
}

void write_report(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty() || c.output == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write output file " + c.output);
  f << text;
  if (!f.flush()) throw ValidationError("failed writing output file " + c.output);
}

}  // namespace

void validate(const RunConfig& c) {
  if (!(c.tol >= 1e-12 && c.tol <= 1e-2)) throw ValidationError("--tol must lie in [1e-12, 1e-2]");
  if (c.grid < 2) throw ValidationError("--grid must be at least 2");
  if (c.trials < 1) throw ValidationError("--trials must be at least 1");
}

std::vector<AppendixRow> cmd_appendix_a(int points, double tol) {
  if (points < 2) throw ValidationError("the damping grid needs at least 2 points");
  const auto gammas = damping_grid(points);
  std::vector<OptResult> single;
  for (double g : gammas) single.push_back(chi_star(g, tol));
  std::vector<AppendixRow> rows;
  rows.reserve(gammas.size() * gammas.size());
  const double w[] = {1.0, 1.0};
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      const double g[] = {gammas[i], gammas[j]};
      const OptResult pair = maximize_chi_sum(g, w, tol);
      const double cp = 0.5 * pair.value;
      const double avg = 0.5 * (single[i].value + single[j].value);
      rows.push_back({g[0], g[1], pair.argmax, cp, single[i].argmax, single[j].argmax, avg, avg - cp});
    }
  }
  return rows;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    write_report(config, execute(config), out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "memcap: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "memcap: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product-state capacities of periodic and random qubit memory channels", "memcap"};
  RunConfig c;
  std::string command;
  std::string format = "csv";
  std::string delta;
  std::string subset;
  std::size_t r = 0;
  double rate = 0.0;

  app.add_option("command", command, "chi | amax | capacity | scale | random-scale | appendix-a | staircase | simulate")
      ->required();
  app.add_option("spec", c.spec_path, "Channel spec JSON file");
  app.add_option("--tol", c.tol, "Optimiser tolerance on the mirror parameter");
  app.add_option("--grid", c.grid, "Points per damping axis for amax and appendix-a");
  app.add_option("--trials", c.trials, "Monte Carlo trials per rate");
  app.add_option("--seed", c.seed, "Seed of the trial stream");
  app.add_option("--output,-o", c.output, "Output file (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* r_opt = app.add_option("--r", r, "Subset size for scale");
  auto* delta_opt = app.add_option("--delta", delta, "Branch subset for random-scale, e.g. 0,2");
  auto* rate_opt = app.add_option("--rate", rate, "Rate in bits per channel use for simulate");
  auto* subset_opt = app.add_option("--subset", subset, "Target branch subset for simulate, e.g. 0,1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "memcap: error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    const auto it = kCommands.find(command);
    if (it == kCommands.end()) throw ValidationError("unknown command \"" + command + "\"");
    c.command = it->second;
    c.format = format == "json" ? Format::json : Format::csv;
    if (*r_opt) c.r = r;
    if (*delta_opt) c.delta = parse_index_list(delta, "--delta");
    if (*rate_opt) c.rate = rate;
    if (*subset_opt) c.subset = parse_index_list(subset, "--subset");
  } catch (const ValidationError& e) {
    err << "memcap: error: " << e.what() << '\n';
    return kExitValidation;
  }
  return dispatch(c, out, err);
}

}  // namespace memcap::cli
