#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "channel_sim.hpp"
#include "circuit_noise.hpp"
#include "codes.hpp"
#include "concatenation.hpp"
#include "io.hpp"
#include "multiround.hpp"
#include "tailoring.hpp"

namespace pauliconj::cli {

enum ExitCode { kOk = 0, kUsage = 1, kInternal = 2 };

// Bad command-line or config input; maps to exit status 1.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string code;
  std::optional<double> theta_start, theta_stop;
  std::optional<int> theta_points;
  std::vector<std::string> schemes;
  int k = 100;
  std::size_t trials = 2000;
  std::optional<std::uint64_t> seed;
  double p_gate = 0;
  std::string out;
  std::string format = "csv";
  // threshold
  int levels = 2;
  std::string report;
  // multiround
  std::string direction = "fixed";
  bool echo = false;
};

// Fields present in the JSON object overwrite cfg.
inline void merge_config_json(RunConfig& cfg, const json& j) {
  auto angle = [](const json& v) { return v.is_string() ? parse_angle(v.get<std::string>()) : v.get<double>(); };
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "command") cfg.command = v.get<std::string>();
      else if (key == "code") cfg.code = v.get<std::string>();
      else if (key == "theta_start") cfg.theta_start = angle(v);
      else if (key == "theta_stop") cfg.theta_stop = angle(v);
      else if (key == "theta_points") cfg.theta_points = v.get<int>();
      else if (key == "scheme" || key == "schemes") cfg.schemes = v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "trials") cfg.trials = v.get<std::size_t>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "p_gate") cfg.p_gate = v.get<double>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "format") cfg.format = v.get<std::string>();
      else if (key == "levels") cfg.levels = v.get<int>();
      else if (key == "report") cfg.report = v.get<std::string>();
      else if (key == "direction") cfg.direction = v.get<std::string>();
      else if (key == "echo") cfg.echo = v.get<bool>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  merge_config_json(cfg, j);
}

struct Grid {
  double start, stop;
  int points;
  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) v.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
    return v;
  }
};

inline Grid grid_of(const RunConfig& cfg, Grid fallback) {
  Grid g{cfg.theta_start.value_or(fallback.start), cfg.theta_stop.value_or(fallback.stop), cfg.theta_points.value_or(fallback.points)};
  if (g.points < 1) throw UsageError("--theta-points must be at least 1");
  const double hi = std::numbers::pi / 2 + 1e-12;
  if (g.start < 0 || g.stop < 0 || g.start > hi || g.stop > hi) throw UsageError("theta grid must lie within [0, pi/2]");
  return g;
}

inline std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for stochastic commands");
  return *cfg.seed;
}

inline StabilizerCode load_code(const RunConfig& cfg) {
  if (cfg.code.empty()) throw UsageError("--code is required");
  try {
    return resolve_code(cfg.code);
  } catch (const LookupError& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  } catch (const StructuralError& e) {
    throw UsageError(std::string("invalid code definition: ") + e.what());
  }
}

// Writes to cfg.out when set, otherwise to the fallback stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw UsageError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

inline void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

struct CodeBundle {
  StabilizerCode code;
  CodeSimulator sim;
  TwirlSet twirl;
  std::vector<EquivClass> classes;

  explicit CodeBundle(StabilizerCode c)
      : code(c), sim(code),
        twirl(build_twirl_set(code, sim.decoder(), reduce_generators(code, NoiseSupport::global_z(code.n)))),
        classes(equivalence_classes(code, sim.decoder(), twirl, NoiseSupport::global_z(code.n))) {}

  // Best class at a reference angle inside (0, pi/4).
  PauliOp best_conjugation(double theta = 0.2) const {
    return search_optimal(sim, GlobalZRotation{theta}, classes).w_max;
  }
};

inline int cmd_codes(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  Output out(cfg.out, os);
  std::vector<StabilizerCode> codes;
  if (cfg.code.empty() || cfg.code == "all") {
    for (const auto& n : registry_names()) codes.push_back(registry(n));
  } else {
    codes.push_back(load_code(cfg));
  }
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& c : codes) arr.push_back(code_to_json(c));
    out.stream() << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
    return kOk;
  }
  CsvWriter w(out.stream(), "codes", {"code", "n", "checks", "twirl_members", "classes"});
  for (const auto& c : codes) {
    CodeBundle b(c);
    w.row({c.name, std::to_string(c.n), std::to_string(c.num_checks()), std::to_string(b.twirl.members.size()),
           std::to_string(b.classes.size())});
  }
  return kOk;
}

// Rows per theta: none, twirl, then one per class representative (identity class included).
inline int cmd_sweep(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  const CodeBundle b(load_code(cfg));
  const Grid g = grid_of(cfg, {0.0, std::numbers::pi / 4, 50});
  std::vector<Scheme> schemes;
  if (cfg.schemes.empty() || (cfg.schemes.size() == 1 && cfg.schemes[0] == "all")) {
    schemes = {Scheme::none(), Scheme::twirl()};
    for (const auto& c : b.classes) schemes.push_back(Scheme::conjugation(c.representative));
  } else {
    for (const auto& s : cfg.schemes) {
      try {
        schemes.push_back(parse_scheme(s, b.code.n));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      } catch (const LookupError& e) {
        throw UsageError(e.what());
      }
    }
  }
  struct Row {
    double theta;
    std::string scheme;
    double f;
  };
  std::vector<Row> rows;
  for (double th : g.values()) {
    const Noise noise = GlobalZRotation{th};
    for (const auto& s : schemes) {
      double f;
      switch (s.kind) {
        case Scheme::Kind::none: f = b.sim.effective_channel(noise, PauliOp(b.code.n)).fidelity(); break;
        case Scheme::Kind::twirl: f = twirled_channel(b.sim, noise, b.twirl.members).fidelity(); break;
        default: f = b.sim.effective_channel(noise, s.w).fidelity(); break;
      }
      rows.push_back({th, s.label(), f});
    }
  }
  Output out(cfg.out, os);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"code", b.code.name}, {"scheme", r.scheme}, {"theta", r.theta}, {"fidelity", r.f}});
    out.stream() << json{{"schema", "sweep"}, {"version", kSchemaVersion}, {"rows", arr}}.dump(2) << '\n';
    return kOk;
  }
  CsvWriter w(out.stream(), "sweep", {"code", "scheme", "theta", "fidelity"});
  for (const auto& r : rows) w.row({b.code.name, r.scheme, fmt_double(r.theta), fmt_double(r.f)});
  return kOk;
}

inline int cmd_search(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  const CodeBundle b(load_code(cfg));
  const Grid g = grid_of(cfg, {0.3, 0.3, 1});
  std::vector<SearchReport> reports;
  for (double th : g.values()) reports.push_back(search_optimal(b.sim, GlobalZRotation{th}, b.classes));
  Output out(cfg.out, os);
  if (cfg.format == "csv") {
    CsvWriter w(out.stream(), "search", {"code", "theta", "rep", "size", "fidelity", "F_T", "F_0", "W_max"});
    for (const auto& r : reports)
      for (const auto& c : r.classes)
        w.row({r.code, fmt_double(r.theta), c.representative.to_indexed(), std::to_string(c.size), fmt_double(c.fidelity),
               fmt_double(r.f_twirl), fmt_double(r.f_none), r.w_max.to_indexed()});
    return kOk;
  }
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(search_to_json(r));
  out.stream() << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
  return kOk;
}

inline std::vector<Scheme> threshold_schemes(const RunConfig& cfg, const CodeBundle& b) {
  std::vector<Scheme> out;
  if (cfg.schemes.empty() || (cfg.schemes.size() == 1 && cfg.schemes[0] == "all"))
    return {Scheme::none(), Scheme::twirl(), Scheme::conjugation(b.best_conjugation())};
  for (const auto& s : cfg.schemes) {
    try {
      out.push_back(parse_scheme(s, b.code.n));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

// Level curves to --out (CSV) and threshold reports to --report (JSON, or CSV by extension).
inline int cmd_threshold(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  if (cfg.levels < 2) throw UsageError("--levels must be at least 2");
  const CodeBundle b(load_code(cfg));
  const Grid g = grid_of(cfg, {0.01, std::numbers::pi / 4 - 0.01, 40});
  if (g.points < 2) throw UsageError("threshold needs at least 2 grid points");
  const Concatenator cc(b.code);
  const auto schemes = threshold_schemes(cfg, b);
  std::vector<ThresholdReport> reports;
  for (const auto& s : schemes)
    reports.push_back(find_threshold(cc, s, ThresholdOptions{1, g.start, g.stop, g.points, 1e-5}));

  Output out(cfg.out, os);
  json jreports = json::array();
  for (const auto& r : reports) jreports.push_back(threshold_to_json(r));
  if (cfg.format == "json") {
    out.stream() << json{{"schema", "threshold"}, {"version", kSchemaVersion}, {"reports", jreports}}.dump(2) << '\n';
  } else {
    CsvWriter w(out.stream(), "threshold_curves", {"code", "scheme", "theta", "level", "fidelity"});
    for (const auto& s : schemes)
      for (double th : g.values())
        for (const auto& lf : iterate_levels(cc, th, s, cfg.levels))
          w.row({b.code.name, s.label(), fmt_double(th), std::to_string(lf.level), fmt_double(lf.fidelity)});
  }
  if (!cfg.report.empty()) {
    std::ofstream rep(cfg.report);
    if (!rep) throw UsageError("cannot write '" + cfg.report + "'");
    if (cfg.report.ends_with(".csv")) {
      CsvWriter w(rep, "threshold_report", {"code", "scheme", "found", "theta_star", "f_star"});
      for (const auto& r : reports)
        w.row({r.code, r.scheme, r.found ? "1" : "0", r.found ? fmt_double(r.theta_star) : "", r.found ? fmt_double(r.f_star) : ""});
    } else {
      rep << json{{"schema", "threshold_report"}, {"version", kSchemaVersion}, {"reports", jreports}}.dump(2) << '\n';
    }
  }
  return kOk;
}

inline RoundSpec parse_round_scheme(const std::string& s, int n) {
  RoundSpec r;
  if (s == "none") return r;
  if (s == "twirl") {
    r.kind = RoundSpec::Kind::twirl;
    return r;
  }
  for (auto [prefix, kind] : {std::pair{"conj:", RoundSpec::Kind::conjugation}, std::pair{"ltwirl:", RoundSpec::Kind::logical_twirl}}) {
    const std::string p = prefix;
    if (s.rfind(p, 0) == 0) {
      r.kind = kind;
      r.w = parse_pauli(s.substr(p.size()), n);
      return r;
    }
  }
  throw UsageError("unknown multiround scheme '" + s + "' (none, twirl, conj:<pauli>, ltwirl:<pauli>)");
}

inline int cmd_multiround(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  if (cfg.k < 1) throw UsageError("--k must be at least 1");
  if (cfg.direction != "fixed" && cfg.direction != "random_walk") throw UsageError("--direction must be fixed or random_walk");
  const CodeBundle b(load_code(cfg));
  const Grid g = grid_of(cfg, {0.0, std::numbers::pi / 4, 50});
  std::vector<RoundSpec> specs;
  if (cfg.schemes.empty() || (cfg.schemes.size() == 1 && cfg.schemes[0] == "all")) {
    const PauliOp w = b.best_conjugation();
    for (const auto& s : {std::string("none"), std::string("twirl"), "conj:" + w.to_indexed(), "ltwirl:" + w.to_indexed()})
      specs.push_back(parse_round_scheme(s, b.code.n));
  } else {
    for (const auto& s : cfg.schemes) {
      try {
        specs.push_back(parse_round_scheme(s, b.code.n));
      } catch (const ParseError& e) {
        throw UsageError(e.what());
      } catch (const DimensionError& e) {
        throw UsageError(e.what());
      }
    }
  }
  const bool stochastic = cfg.direction == "fixed" &&
                          std::any_of(specs.begin(), specs.end(), [](const RoundSpec& s) { return s.kind == RoundSpec::Kind::logical_twirl; });
  const std::uint64_t seed = stochastic ? require_seed(cfg) : cfg.seed.value_or(0);
  Output out(cfg.out, os);
  CsvWriter w(out.stream(), "multiround", {"code", "scheme", "theta", "k", "fidelity", "stderr"},
              "direction=" + cfg.direction + (cfg.echo ? " echo=1" : ""));
  for (double th : g.values())
    for (RoundSpec s : specs) {
      s.k = cfg.k;
      s.theta = th;
      s.direction = cfg.direction == "fixed" ? RoundSpec::Direction::fixed : RoundSpec::Direction::random_walk;
      s.echo = cfg.echo;
      s.trials = cfg.trials;
      s.seed = seed;
      const Estimate e = multiround_fidelity(b.sim, s, b.twirl.members);
      w.row({b.code.name, scheme_label(s), fmt_double(th), std::to_string(cfg.k), fmt_double(e.mean), fmt_double(e.std_error)});
    }
  return kOk;
}

inline int cmd_noisy(const RunConfig& cfg, std::ostream& os) {
  check_format(cfg);
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.p_gate < 0 || cfg.p_gate > 1) throw UsageError("--p-gate must lie in [0, 1]");
  if (cfg.trials < 1) throw UsageError("--trials must be positive");
  const CodeBundle b(load_code(cfg));
  const Grid g = grid_of(cfg, {0.2, 0.2, 1});
  std::vector<std::pair<std::string, PauliOp>> schemes;
  if (cfg.schemes.empty() || (cfg.schemes.size() == 1 && cfg.schemes[0] == "all")) {
    schemes.emplace_back("none", PauliOp(b.code.n));
    const PauliOp w = b.best_conjugation();
    schemes.emplace_back("conj:" + w.to_indexed(), w);
  } else {
    for (const auto& s : cfg.schemes) {
      Scheme sc;
      try {
        sc = parse_scheme(s, b.code.n);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      if (sc.kind == Scheme::Kind::twirl) throw UsageError("noisy runs support none and conj:<pauli> only");
      schemes.emplace_back(sc.label(), sc.kind == Scheme::Kind::none ? PauliOp(b.code.n) : sc.w);
    }
  }
  Output out(cfg.out, os);
  CsvWriter w(out.stream(), "noisy", {"code", "scheme", "theta", "p_gate", "trials", "fidelity", "stderr"});
  const auto model = DepolarizingModel::uniform(cfg.p_gate);
  for (double th : g.values())
    for (const auto& [label, pw] : schemes) {
      const Estimate e = noisy_fidelity(b.sim, th, pw, model, cfg.trials, seed);
      w.row({b.code.name, label, fmt_double(th), fmt_double(cfg.p_gate), std::to_string(cfg.trials), fmt_double(e.mean),
             fmt_double(e.std_error)});
    }
  return kOk;
}

// Dispatches cfg.command; maps exceptions to exit codes and reports them on err.
inline int run(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    if (cfg.command == "codes") return cmd_codes(cfg, os);
    if (cfg.command == "sweep") return cmd_sweep(cfg, os);
    if (cfg.command == "search") return cmd_search(cfg, os);
    if (cfg.command == "threshold") return cmd_threshold(cfg, os);
    if (cfg.command == "multiround") return cmd_multiround(cfg, os);
    if (cfg.command == "noisy") return cmd_noisy(cfg, os);
    throw UsageError("unknown command '" + cfg.command + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    err << "structural error: " << e.what() << '\n';
    return kInternal;
  } catch (const ToleranceError& e) {
    err << "tolerance error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace pauliconj::cli
