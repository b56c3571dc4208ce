#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "channel_sim.hpp"
#include "codes.hpp"
#include "ptm.hpp"
#include "tailoring.hpp"

namespace pauliconj {

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

inline Estimate summarize(const std::vector<double>& samples) {
  Estimate e;
  if (samples.empty()) return e;
  double s = 0;
  for (double v : samples) s += v;
  e.mean = s / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / static_cast<double>(samples.size() - 1) / static_cast<double>(samples.size()));
  }
  return e;
}

// splitmix64 finaliser; derives independent per-trial seeds from one 64-bit seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Runs f(trial) for every trial on all cores; results stay in trial order.
template <class F>
std::vector<double> parallel_trials(std::size_t trials, F&& f) {
  std::vector<double> out(trials);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), trials));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < trials; t += workers) out[t] = f(t);
    });
  for (auto& th : pool) th.join();
  return out;
}

inline double dephasing_fidelity_k(double p_d, int k) {
  if (k < 1) throw DimensionError("round count must be at least 1");
  return (std::pow(1 - 2 * p_d, k) + 2) / 3;
}

// Dephasing probability with the same fidelity as t: F = 1 - (2/3) p_d.
inline double dephasing_probability(const LogicalPTM& t) { return 0.5 * (1 - 0.5 * (t(1, 1) + t(2, 2))); }

inline std::complex<double> rotation_eigenvalue(const SyndromeDecomposition& d) {
  std::complex<double> lam = 0;
  for (const auto& e : d.entries) lam += e.probability * std::polar(1.0, -e.phi);
  return lam;
}

// Same-direction noise: the per-syndrome rotations add coherently across rounds.
inline double coherent_fidelity_k(const SyndromeDecomposition& d, int k) {
  if (k < 1) throw DimensionError("round count must be at least 1");
  return (std::pow(rotation_eigenvalue(d), k).real() + 2) / 3;
}

// Fixed direction with every logical qubit flipped halfway: later rounds rotate backwards.
inline double echo_fidelity_k(const SyndromeDecomposition& d, int k) {
  if (k < 1) throw DimensionError("round count must be at least 1");
  const auto lam = rotation_eigenvalue(d);
  return ((std::pow(lam, (k + 1) / 2) * std::pow(std::conj(lam), k / 2)).real() + 2) / 3;
}

// Rotation sign drawn uniformly each round.
inline LogicalPTM random_walk_channel(const SyndromeDecomposition& d) {
  double keep = 0;
  for (const auto& e : d.entries) keep += e.probability * std::cos(e.phi);
  LogicalPTM t;
  t.m(1, 1) = keep;
  t.m(2, 2) = keep;
  return t;
}

// Each round uses W or W.X_L uniformly at random; the k channels are composed.
inline Estimate logical_twirl_sim(const CodeSimulator& sim, double theta, const PauliOp& w, int k, std::size_t trials,
                                  std::uint64_t seed) {
  if (k < 1 || trials < 1) throw DimensionError("need k >= 1 and at least one trial");
  const Noise noise = GlobalZRotation{theta};
  const Eigen::Matrix4d a = sim.effective_channel(noise, w).m;
  const Eigen::Matrix4d b = sim.effective_channel(noise, compose(w, sim.code().logical_x)).m;
  const auto samples = parallel_trials(trials, [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    Eigen::Matrix4d acc = Eigen::Matrix4d::Identity();
    for (int r = 0; r < k; ++r) acc = ((rng() >> 63) ? b : a) * acc;
    return (acc.trace() + 2) / 6;
  });
  return summarize(samples);
}

inline Estimate logical_twirl_sim(const StabilizerCode& code, double theta, const PauliOp& w, int k, std::size_t trials,
                                  std::uint64_t seed) {
  return logical_twirl_sim(CodeSimulator(code), theta, w, k, trials, seed);
}

struct RoundSpec {
  enum class Direction { fixed, random_walk };
  enum class Kind { none, twirl, conjugation, logical_twirl };
  int k = 1;
  double theta = 0;
  Direction direction = Direction::fixed;
  Kind kind = Kind::none;
  PauliOp w;  // conjugation and logical_twirl
  bool echo = false;
  std::size_t trials = 2000;
  std::uint64_t seed = 0;
};

inline std::string scheme_label(const RoundSpec& s) {
  switch (s.kind) {
    case RoundSpec::Kind::none: return "none";
    case RoundSpec::Kind::twirl: return "twirl";
    case RoundSpec::Kind::conjugation: return "conj:" + s.w.to_indexed();
    default: return "ltwirl:" + s.w.to_indexed();
  }
}

// k-round fidelity under the chosen noise model and scheme. Exact except logical_twirl with fixed direction.
inline Estimate multiround_fidelity(const CodeSimulator& sim, const RoundSpec& s, const std::vector<PauliOp>& twirl_set) {
  if (s.k < 1) throw DimensionError("round count must be at least 1");
  if (s.theta < 0 || s.theta > std::numbers::pi / 2) throw DimensionError("theta outside [0, pi/2]");
  const int n = sim.code().n;
  const PauliOp w = (s.kind == RoundSpec::Kind::conjugation || s.kind == RoundSpec::Kind::logical_twirl) ? s.w : PauliOp(n);
  const bool random_walk = s.direction == RoundSpec::Direction::random_walk;
  if (s.kind == RoundSpec::Kind::twirl) {
    const LogicalPTM t = twirled_channel(sim, GlobalZRotation{s.theta}, twirl_set);
    if (random_walk) return {dephasing_fidelity_k(dephasing_probability(t), s.k), 0};
    if (s.echo) {
      const LogicalPTM f = twirled_channel(sim, GlobalZRotation{-s.theta}, twirl_set);
      return {(matrix_power(f.m, s.k / 2) * matrix_power(t.m, (s.k + 1) / 2)).trace() / 6 + 1.0 / 3, 0};
    }
    return {(matrix_power(t.m, s.k).trace() + 2) / 6, 0};
  }
  const auto d = sim.syndrome_decomposition(s.theta, w);
  if (random_walk)
    return {dephasing_fidelity_k(dephasing_probability(random_walk_channel(d)), s.k), 0};
  // The random W / W.X_L choice already scrambles the rotation sign; echo changes nothing.
  if (s.kind == RoundSpec::Kind::logical_twirl) return logical_twirl_sim(sim, s.theta, w, s.k, s.trials, s.seed);
  if (s.echo) return {echo_fidelity_k(d, s.k), 0};
  return {coherent_fidelity_k(d, s.k), 0};
}

}  // namespace pauliconj
