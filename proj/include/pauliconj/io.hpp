#pragma once

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "channel_sim.hpp"
#include "codes.hpp"
#include "concatenation.hpp"
#include "errors.hpp"
#include "tailoring.hpp"

namespace pauliconj {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

// "0.3", "pi/4", "3pi/8", "3*pi/8", "-pi/6", "pi".
inline double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ParseError("bad angle '" + text + "'");
    }
    if (used != t.size()) throw ParseError("bad angle '" + text + "'");
    return v;
  };
  const auto pi_at = s.find("pi");
  if (pi_at == std::string::npos) return number(s);
  std::string coef = s.substr(0, pi_at), rest = s.substr(pi_at + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double v = std::numbers::pi;
  if (coef == "-") v = -v;
  else if (!coef.empty() && coef != "+") v *= number(coef);
  if (!rest.empty()) {
    if (rest[0] != '/') throw ParseError("bad angle '" + text + "'");
    const double d = number(rest.substr(1));
    if (d == 0) throw ParseError("zero denominator in angle '" + text + "'");
    v /= d;
  }
  return v;
}

// --- CSV -----------------------------------------------------------------------

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& schema, std::vector<std::string> columns, const std::string& extra = "")
      : os_(os), width_(columns.size()) {
    os_ << "# schema=" << schema << " version=" << kSchemaVersion;
    if (!extra.empty()) os_ << ' ' << extra;
    os_ << '\n';
    row(columns);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw DimensionError("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t width_;
};

// --- JSON ------------------------------------------------------------------------

inline json ptm_to_json(const LogicalPTM& t) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(t(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json decomposition_to_json(const SyndromeDecomposition& d) {
  json out = json::array();
  for (const auto& e : d.entries) out.push_back({{"syndrome", e.syndrome.to_string()}, {"p", e.probability}, {"phi", e.phi}});
  return out;
}

inline json search_to_json(const SearchReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"rep", c.representative.to_indexed()}, {"size", c.size}, {"fidelity", c.fidelity}});
  return {{"code", r.code},   {"theta", r.theta},         {"classes", classes},         {"F_T", r.f_twirl},
          {"F_0", r.f_none}, {"W_max", r.w_max.to_indexed()}, {"all_equal", r.all_equal}};
}

inline json threshold_to_json(const ThresholdReport& r) {
  json j = {{"code", r.code}, {"scheme", r.scheme}, {"found", r.found}};
  if (r.found) {
    j["theta_star"] = r.theta_star;
    j["f_star"] = r.f_star;
  } else {
    j["theta_star"] = nullptr;
    j["f_star"] = nullptr;
  }
  j["levels"] = {r.level_low, r.level_high};
  j["grid"] = {{"start", r.grid_start}, {"stop", r.grid_stop}, {"points", r.grid_points}};
  return j;
}

// Permutations and qubit priorities are 1-based in the file.
inline json code_to_json(const StabilizerCode& c) {
  json stabs = json::array();
  for (const auto& s : c.stabilizer_gens) stabs.push_back(s.to_dense());
  json syms = json::array();
  for (const auto& p : c.symmetry_gens) {
    json a = json::array();
    for (int v : p) a.push_back(v + 1);
    syms.push_back(a);
  }
  json j = {{"name", c.name},
            {"n", c.n},
            {"stabilizers", stabs},
            {"logical_x", c.logical_x.to_dense()},
            {"logical_z", c.logical_z.to_dense()},
            {"symmetries", syms}};
  if (!c.qubit_priority.empty()) {
    json a = json::array();
    for (int v : c.qubit_priority) a.push_back(v + 1);
    j["qubit_priority"] = a;
  }
  return j;
}

inline StabilizerCode code_from_json(const json& j) {
  StabilizerCode c;
  try {
    c.name = j.at("name").get<std::string>();
    c.n = j.at("n").get<int>();
    if (c.n < 1 || c.n > 16) throw StructuralError("code qubit count must be in 1..16");
    for (const auto& s : j.at("stabilizers")) c.stabilizer_gens.push_back(parse_pauli(s.get<std::string>(), c.n));
    c.logical_x = parse_pauli(j.at("logical_x").get<std::string>(), c.n);
    c.logical_z = parse_pauli(j.at("logical_z").get<std::string>(), c.n);
    if (j.contains("symmetries"))
      for (const auto& p : j.at("symmetries")) {
        Permutation perm;
        for (const auto& v : p) perm.push_back(v.get<int>() - 1);
        c.symmetry_gens.push_back(perm);
      }
    if (j.contains("qubit_priority"))
      for (const auto& v : j.at("qubit_priority")) c.qubit_priority.push_back(v.get<int>() - 1);
  } catch (const json::exception& e) {
    throw ParseError(std::string("code definition: ") + e.what());
  }
  validate(c);
  return c;
}

inline StabilizerCode load_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open code file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("code file '" + path + "': " + e.what());
  }
  return code_from_json(j);
}

// Registry name, or a path to a JSON code definition.
inline StabilizerCode resolve_code(const std::string& spec) {
  if (spec.size() > 5 && spec.ends_with(".json")) return load_code_file(spec);
  return registry(spec);
}

}  // namespace pauliconj
