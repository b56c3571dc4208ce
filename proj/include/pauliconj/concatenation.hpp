#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "channel_sim.hpp"
#include "codes.hpp"
#include "ptm.hpp"
#include "tailoring.hpp"

namespace pauliconj {

// Logical Z rotation mixed with dephasing:
// [[1,0,0,0],[0,a,-b,0],[0,b,a,0],[0,0,0,c]].
struct ZChannel {
  double a = 1;
  double b = 0;
  double c = 1;

  static ZChannel rotation(double theta) { return {std::cos(2 * theta), std::sin(2 * theta), 1.0}; }
  static ZChannel dephasing(double p) { return {1 - 2 * p, 0.0, 1.0}; }

  Eigen::Matrix4d ptm() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(1, 1) = a;
    m(1, 2) = -b;
    m(2, 1) = b;
    m(2, 2) = a;
    m(3, 3) = c;
    return m;
  }
  double fidelity() const { return (3 + 2 * a + c) / 6.0; }
  bool is_cp(double tol = 1e-12) const { return is_completely_positive(ptm(), tol); }
};

struct ZChannelFit {
  ZChannel channel;
  // Largest deviation of the PTM from the fitted family member.
  double residual = 0;
};

inline ZChannelFit fit_zchannel(const LogicalPTM& t) {
  ZChannelFit f;
  f.channel.a = 0.5 * (t(1, 1) + t(2, 2));
  f.channel.b = 0.5 * (t(2, 1) - t(1, 2));
  f.channel.c = t(3, 3);
  f.residual = (t.m - f.channel.ptm()).cwiseAbs().maxCoeff();
  return f;
}

inline ZChannel checked_fit(const LogicalPTM& t, const std::string& what, double tol = 1e-9) {
  const ZChannelFit f = fit_zchannel(t);
  if (f.residual > tol)
    throw StructuralError(what + ": logical channel leaves the Z-rotation/dephasing family (residual " +
                          std::to_string(f.residual) + ")");
  return f.channel;
}

inline ZChannelFit fit_logical_map(const CodeSimulator& sim, const ZChannel& ch) {
  if (!ch.is_cp(1e-10)) throw ToleranceError("input channel is not completely positive");
  return fit_zchannel(sim.effective_channel(ProductChannel{ch.ptm()}, PauliOp(sim.code().n)));
}

// Same channel on every physical qubit, hard decoding, refit.
inline ZChannel logical_map(const CodeSimulator& sim, const ZChannel& ch) {
  const ZChannelFit f = fit_logical_map(sim, ch);
  if (f.residual > 1e-9)
    throw StructuralError(sim.code().name + ": logical map leaves the Z channel family (residual " + std::to_string(f.residual) + ")");
  return f.channel;
}

inline ZChannel logical_map(const StabilizerCode& code, const ZChannel& ch) { return logical_map(CodeSimulator(code), ch); }

struct Scheme {
  enum class Kind { none, twirl, conjugation };
  Kind kind = Kind::none;
  PauliOp w;  // conjugation only

  static Scheme none() { return {}; }
  static Scheme twirl() { return {Kind::twirl, {}}; }
  static Scheme conjugation(const PauliOp& w) { return {Kind::conjugation, w}; }

  std::string label() const {
    switch (kind) {
      case Kind::none: return "none";
      case Kind::twirl: return "twirl";
      default: return "conj:" + w.to_indexed();
    }
  }
};

inline Scheme parse_scheme(const std::string& text, int n) {
  if (text == "none") return Scheme::none();
  if (text == "twirl") return Scheme::twirl();
  const std::string prefix = "conj:";
  if (text.rfind(prefix, 0) == 0) return Scheme::conjugation(parse_pauli(text.substr(prefix.size()), n));
  throw LookupError("unknown scheme '" + text + "' (expected none, twirl or conj:<pauli>)");
}

// Shared per-code state for level iteration.
class Concatenator {
 public:
  explicit Concatenator(const StabilizerCode& code)
      : sim_(code), twirl_(build_twirl_set(code, sim_.decoder(), reduce_generators(code, NoiseSupport::global_z(code.n))).members) {}

  const CodeSimulator& simulator() const { return sim_; }
  const std::vector<PauliOp>& twirl_set() const { return twirl_; }

  LogicalPTM level1_ptm(double theta, const Scheme& s) const {
    const Noise noise = GlobalZRotation{theta};
    switch (s.kind) {
      case Scheme::Kind::none: return sim_.effective_channel(noise, PauliOp(sim_.code().n));
      case Scheme::Kind::twirl: return twirled_channel(sim_, noise, twirl_);
      default: return sim_.effective_channel(noise, s.w);
    }
  }

  ZChannel level1(double theta, const Scheme& s) const {
    return checked_fit(level1_ptm(theta, s), sim_.code().name + " level 1 (" + s.label() + ")");
  }

  // Fidelities for levels 1..L.
  std::vector<double> fidelities(double theta, const Scheme& s, int levels) const {
    if (levels < 1) throw DimensionError("need at least one level");
    std::vector<double> f;
    ZChannel ch = level1(theta, s);
    f.push_back(ch.fidelity());
    for (int l = 2; l <= levels; ++l) {
      ch = logical_map(sim_, ch);
      f.push_back(ch.fidelity());
    }
    return f;
  }

 private:
  CodeSimulator sim_;
  std::vector<PauliOp> twirl_;
};

inline ZChannel scheme_level1_map(const StabilizerCode& code, double theta, const Scheme& s) {
  return Concatenator(code).level1(theta, s);
}

struct LevelFidelity {
  int level = 0;
  double fidelity = 0;
};

inline std::vector<LevelFidelity> iterate_levels(const Concatenator& cc, double theta, const Scheme& s, int levels) {
  std::vector<LevelFidelity> out;
  const auto f = cc.fidelities(theta, s, levels);
  for (int l = 0; l < levels; ++l) out.push_back({l + 1, f[l]});
  return out;
}

inline std::vector<LevelFidelity> iterate_levels(const StabilizerCode& code, double theta, const Scheme& s, int levels) {
  return iterate_levels(Concatenator(code), theta, s, levels);
}

struct ThresholdReport {
  std::string code;
  std::string scheme;
  bool found = false;
  double theta_star = 0;
  double f_star = 0;
  int level_low = 1;
  int level_high = 2;
  // theta grid scanned for the bracket
  double grid_start = 0;
  double grid_stop = 0;
  int grid_points = 0;
};

struct ThresholdOptions {
  int level_low = 1;
  double theta_start = 0.01;
  double theta_stop = std::numbers::pi / 4 - 0.01;
  int points = 40;
  double tolerance = 1e-5;
};

// First + to - sign change of F_{l+1} - F_l on the grid, refined by bisection.
inline ThresholdReport find_threshold(const Concatenator& cc, const Scheme& s, const ThresholdOptions& opt = {}) {
  if (opt.points < 2) throw DimensionError("threshold grid needs at least 2 points");
  if (opt.level_low < 1) throw DimensionError("levels start at 1");
  ThresholdReport r;
  r.code = cc.simulator().code().name;
  r.scheme = s.label();
  r.level_low = opt.level_low;
  r.level_high = opt.level_low + 1;
  r.grid_start = opt.theta_start;
  r.grid_stop = opt.theta_stop;
  r.grid_points = opt.points;
  auto gap = [&](double th) {
    const auto f = cc.fidelities(th, s, r.level_high);
    return f[r.level_high - 1] - f[r.level_low - 1];
  };
  double prev_t = opt.theta_start, prev_g = gap(prev_t);
  for (int i = 1; i < opt.points; ++i) {
    const double t = opt.theta_start + (opt.theta_stop - opt.theta_start) * i / (opt.points - 1);
    const double g = gap(t);
    if (prev_g > 0 && g <= 0) {
      double lo = prev_t, hi = t;
      while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0 ? lo : hi) = mid;
      }
      r.found = true;
      r.theta_star = 0.5 * (lo + hi);
      r.f_star = cc.fidelities(r.theta_star, s, r.level_low).back();
      return r;
    }
    prev_t = t;
    prev_g = g;
  }
  return r;
}

inline ThresholdReport find_threshold(const StabilizerCode& code, const Scheme& s, const ThresholdOptions& opt = {}) {
  return find_threshold(Concatenator(code), s, opt);
}

}  // namespace pauliconj
