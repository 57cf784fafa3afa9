#include <charconv>
#include <cmath>
#include <locale>
#include <sstream>
#include <string>

#include <json.hpp>

#include "memcap/scales.hpp"

namespace memcap {

namespace {

using nlohmann::ordered_json;

// Rounds to 12 significant digits so that json dumps no more than that.
double rounded(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_number(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return rounded(v);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_subset(std::span<const std::size_t> subset) {
  std::string out;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(subset[k]);
  }
  return out;
}

std::string to_json(const CapacityReport& report) {
  ordered_json j;
  j["cp"] = number(report.cp);
  j["cbar"] = number(report.cbar);
  ordered_json scale = ordered_json::object();
  for (const auto& [r, e] : report.scale) {
    scale[std::to_string(r)] = {{"value", number(e.value)}, {"best_subset", e.subset}};
  }
  j["scale"] = std::move(scale);
  ordered_json sup = ordered_json::array();
  for (const auto& b : report.per_branch_suprema) {
    sup.push_back({{"a_max", b.a_max ? number(*b.a_max) : ordered_json(nullptr)}, {"chi_star", number(b.chi_star)}});
  }
  j["per_branch_suprema"] = std::move(sup);
  j["tol"] = number(report.tol);
  j["method"] = report.method;
  return j.dump(2) + "\n";
}

std::string to_json(const RandomScaleReport& report) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& e : report.per_subset) {
    rows.push_back({{"delta", e.delta},
                    {"q_delta", number(e.q_delta)},
                    {"c_delta", number(e.c_delta)},
                    {"cbar_delta", number(e.cbar_delta)}});
  }
  j["per_subset"] = std::move(rows);
  j["tol"] = number(report.tol);
  j["method"] = report.method;
  return j.dump(2) + "\n";
}

std::string to_csv(const CapacityReport& report) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  const double l = static_cast<double>(report.scale.size());
  out << "r,value_bits,subset,error_threshold\n";
  for (const auto& [r, e] : report.scale) {
    out << r << ',' << format_number(e.value) << ',' << format_subset(e.subset) << ','
        << format_number(1.0 - static_cast<double>(r) / l) << '\n';
  }
  return out.str();
}

std::string to_csv(const RandomScaleReport& report) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "delta,q_delta,c_delta_bits,cbar_delta_bits\n";
  for (const auto& e : report.per_subset) {
    out << format_subset(e.delta) << ',' << format_number(e.q_delta) << ',' << format_number(e.c_delta) << ','
        << format_number(e.cbar_delta) << '\n';
  }
  return out.str();
}

}  // namespace memcap
