#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "memcap/errors.hpp"
#include "memcap/optim.hpp"
#include "memcap_cli/cli.hpp"
#include "memcap_cli/spec.hpp"

using namespace memcap;
using namespace memcap::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "memcap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("memcap_cli_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

const char* kPair =
    R"({"branches": [{"type": "amplitude_damping", "gamma": 0}, {"type": "amplitude_damping", "gamma": 0.4}],
        "memory": {"kind": "periodic"}})";

}  // namespace

TEST_CASE("capacity report on a two-branch spec") {
  const auto spec = write_temp("pair.json", kPair);
  const auto r = invoke({"capacity", spec, "--format", "json"});
  REQUIRE(r.status == kExitOk);
  CHECK(r.err.empty());
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["cp"].get<double>() - 0.7718268599636) < 1e-10);
  CHECK(std::abs(j["cbar"].get<double>() - 0.7764783532281) < 1e-10);
  for (const char* key : {"cp", "cbar", "scale", "per_branch_suprema", "tol", "method"}) CHECK(j.contains(key));
  CHECK(j["scale"]["2"]["best_subset"] == nlohmann::json::array({0, 1}));
}

TEST_CASE("output is byte-identical across runs") {
  const auto spec = write_temp("pair_sim.json", kPair);
  const auto a = invoke({"simulate", spec, "--rate", "0.7", "--subset", "0", "--trials", "5000", "--seed", "9"});
  const auto b = invoke({"simulate", spec, "--rate", "0.7", "--subset", "0", "--trials", "5000", "--seed", "9"});
  REQUIRE(a.status == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find('\r') == std::string::npos);
  const auto c = invoke({"staircase", spec, "--trials", "3000"});
  const auto d = invoke({"staircase", spec, "--trials", "3000"});
  CHECK(c.status == kExitOk);
  CHECK(c.out == d.out);
}

TEST_CASE("validation failures exit with status 2") {
  const auto bad_q = write_temp("bad_q.json",
                                R"({"branches": [{"type": "amplitude_damping", "gamma": 0.1},
                                                 {"type": "amplitude_damping", "gamma": 0.2}],
                                    "memory": {"kind": "random", "q": [0.5, 0.6]}})");
  const auto pair = write_temp("pair_v.json", kPair);
  const std::vector<std::vector<std::string>> cases = {
      {"random-scale", bad_q},
      {"scale", pair, "--r", "3"},
      {"scale", bad_q},
      {"random-scale", pair},
      {"capacity", "/nonexistent/spec.json"},
      {"capacity", pair, "--tol", "0.5"},
      {"amax", "--grid", "1"},
      {"frobnicate", pair},
      {"capacity", pair, "--format", "xml"},
      {"simulate", pair, "--rate", "0.1"},
      {"simulate", pair, "--rate", "0.1", "--subset", "0,x"},
      {"capacity", pair, "--output", "/nonexistent/dir/out.csv"},
  };
  for (const auto& args : cases) {
    const auto r = invoke(args);
    CAPTURE(args[0]);
    CHECK(r.status == kExitValidation);
    CHECK(r.out.empty());
    // One diagnostic line.
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("rate at a threshold is reported as a validation error") {
  // Two noiseless branches: every threshold is exactly 1 bit.
  const auto spec = write_temp("pair_tie.json",
                               R"({"branches": [{"type": "amplitude_damping", "gamma": 0},
                                                {"type": "amplitude_damping", "gamma": 0}],
                                   "memory": {"kind": "periodic"}})");
  const auto r = invoke({"simulate", spec, "--rate", "1", "--subset", "0", "--trials", "10"});
  CHECK(r.status == kExitValidation);
}

TEST_CASE("spec parser") {
  const auto spec = parse_channel_spec(R"({"branches": [
      {"type": "kraus", "operators": [[[1, 0], [0, [0.8, 0]]], [[0, 0.6], [0, 0]]]},
      {"type": "depolarizing", "p": 0.2}],
    "memory": {"kind": "markov", "Q": [[0.9, 0.1], [0.1, 0.9]], "lambda": [0.5, 0.5]}})");
  CHECK(spec.branches.size() == 2);
  CHECK(spec.branches[0].kind() == ChannelKind::kraus);
  CHECK(std::holds_alternative<MarkovMemory>(spec.memory));

  CHECK_THROWS_AS(parse_channel_spec("{"), ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [], "memory": {"kind": "periodic"}})"), ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [{"type": "amplitude_damping", "gamma": 0.1, "p": 1}],
                                         "memory": {"kind": "periodic"}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [{"type": "erasure"}], "memory": {"kind": "periodic"}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [{"type": "kraus", "operators": [[[1, 0], [0, 0.5]]]}],
                                         "memory": {"kind": "periodic"}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [{"type": "amplitude_damping", "gamma": 0.1}],
                                         "memory": {"kind": "random", "q": [0.5, 0.5]}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_channel_spec(R"({"branches": [{"type": "amplitude_damping", "gamma": 0.1}]})"),
                  ValidationError);
}

TEST_CASE("appendix-a table") {
  const auto rows = cmd_appendix_a(11, 1e-8);
  CHECK(rows.size() == 121);
  for (const auto& r : rows) {
    CHECK(r.gap >= -1e-9);
    if (r.gamma0 == r.gamma1) CHECK(std::abs(r.gap) < 1e-12);
    if (r.gamma0 == 1.0 || r.gamma1 == 1.0) CHECK(std::abs(r.gap) < 1e-7);
  }
  // Row (0, 0.4).
  CHECK(rows[4].gamma0 == 0.0);
  CHECK(std::abs(rows[4].gamma1 - 0.4) < 1e-15);
  CHECK(rows[4].gap > 1e-5);
  CHECK(std::abs(rows[4].cp - 0.7718268599636) < 1e-10);

  const auto r = invoke({"appendix-a", "--grid", "3"});
  REQUIRE(r.status == kExitOk);
  CHECK(r.out.rfind("gamma0,gamma1,a_max,cp,a_max0,a_max1,chi_star_avg,gap\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}

TEST_CASE("chi and amax commands") {
  const auto a = invoke({"amax", "--grid", "11"});
  REQUIRE(a.status == kExitOk);
  CHECK(a.out.find("\n0.3,0.58053192") != std::string::npos);
  const auto spec = write_temp("pair_chi.json", kPair);
  const auto c = invoke({"chi", spec, "--format", "json"});
  REQUIRE(c.status == kExitOk);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(std::abs(j["branches"][1]["chi_star"].get<double>() - chi_star(0.4).value) < 1e-11);
}

TEST_CASE("output file") {
  const auto spec = write_temp("pair_out.json", kPair);
  const auto path = (std::filesystem::temp_directory_path() / "memcap_cli_out.csv").string();
  const auto r = invoke({"scale", spec, "--r", "2", "--output", path});
  REQUIRE(r.status == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().rfind("r,value_bits,subset,error_threshold\n2,0.771826859973,0;1,0\n", 0) == 0);
}
