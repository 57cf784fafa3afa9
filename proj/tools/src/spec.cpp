#include "memcap_cli/spec.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "memcap/errors.hpp"

namespace memcap::cli {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key \"" + key + "\" in " + where);
  }
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + " is missing \"" + key + "\"");
  return *it;
}

double real_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ValidationError(what + " must be a number");
  return v.get<double>();
}

std::vector<double> real_vector(const json& v, const std::string& what) {
  if (!v.is_array()) throw ValidationError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_number(x, what));
  return out;
}

Complex complex_entry(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ValidationError("Kraus entries must be numbers or [re, im] pairs");
}

ComplexMatrix kraus_matrix(const json& v) {
  if (!v.is_array() || v.size() != 2) throw ValidationError("each Kraus operator must be a 2x2 array");
  ComplexMatrix m(2);
  for (std::size_t r = 0; r < 2; ++r) {
    if (!v[r].is_array() || v[r].size() != 2) throw ValidationError("each Kraus operator must be a 2x2 array");
    for (std::size_t c = 0; c < 2; ++c) m(r, c) = complex_entry(v[r][c]);
  }
  return m;
}

QubitChannel parse_branch(const json& b, std::size_t index) {
  const std::string where = "branch " + std::to_string(index);
  if (!b.is_object()) throw ValidationError(where + " must be a JSON object");
  const json& type = field(b, "type", where);
  if (!type.is_string()) throw ValidationError(where + " type must be a string");
  const auto t = type.get<std::string>();
  if (t == "amplitude_damping") {
    only_keys(b, {"type", "gamma"}, where);
    return QubitChannel::amplitude_damping(real_number(field(b, "gamma", where), where + " gamma"));
  }
  if (t == "depolarizing") {
    only_keys(b, {"type", "p"}, where);
    return QubitChannel::depolarizing(real_number(field(b, "p", where), where + " p"));
  }
  if (t == "kraus") {
    only_keys(b, {"type", "operators"}, where);
    const json& ops = field(b, "operators", where);
    if (!ops.is_array() || ops.empty()) throw ValidationError(where + " operators must be a nonempty array");
    std::vector<ComplexMatrix> mats;
    for (const auto& op : ops) mats.push_back(kraus_matrix(op));
    return QubitChannel::from_kraus(std::move(mats));
  }
  throw ValidationError(where + " has unknown type \"" + t + "\"");
}

MemoryLaw parse_memory(const json& m) {
  if (!m.is_object()) throw ValidationError("memory must be a JSON object");
  const json& kind = field(m, "kind", "memory");
  if (!kind.is_string()) throw ValidationError("memory kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "periodic") {
    only_keys(m, {"kind"}, "memory");
    return PeriodicMemory{};
  }
  if (k == "random") {
    only_keys(m, {"kind", "q"}, "memory");
    return RandomMemory{real_vector(field(m, "q", "memory"), "q")};
  }
  if (k == "markov") {
    only_keys(m, {"kind", "Q", "lambda"}, "memory");
    const json& q = field(m, "Q", "memory");
    if (!q.is_array()) throw ValidationError("Q must be an array of rows");
    MarkovMemory law;
    for (const auto& row : q) law.transition.push_back(real_vector(row, "Q row"));
    law.stationary = real_vector(field(m, "lambda", "memory"), "lambda");
    return law;
  }
  throw ValidationError("unknown memory kind \"" + k + "\"");
}

}  // namespace

ChannelSpec parse_channel_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("channel spec is not valid JSON: ") + e.what());
  }
  only_keys(doc, {"branches", "memory"}, "channel spec");
  const json& branches = field(doc, "branches", "channel spec");
  if (!branches.is_array() || branches.empty()) throw ValidationError("branches must be a nonempty array");
  ChannelSpec spec;
  for (std::size_t i = 0; i < branches.size(); ++i) spec.branches.push_back(parse_branch(branches[i], i));
  spec.memory = parse_memory(field(doc, "memory", "channel spec"));
  // Cross-checks q, Q and lambda against the branch count.
  MemoryChannel(spec.branches, spec.memory);
  return spec;
}

ChannelSpec load_channel_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read channel spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

}  // namespace memcap::cli
