#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "pauliconj/channel_sim.hpp"
#include "support.hpp"

using namespace pauliconj;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) { return (a - b).cwiseAbs().maxCoeff(); }

const CodeSimulator& sim(const std::string& name) {
  static std::map<std::string, CodeSimulator> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, CodeSimulator(registry(name))).first;
  return it->second;
}

Eigen::Matrix4d oracle_channel(const std::string& name, double theta, const PauliOp& w) {
  return oracle::global_z_channel(to_oracle(registry(name)), oracle_decoder(name), theta, w.to_dense());
}

// Same single-qubit Pauli channel (px, py, pz) on every qubit, summed over all Pauli strings.
Eigen::Matrix4d oracle_pauli_channel(const std::string& name, std::array<double, 4> probs) {
  const auto c = to_oracle(registry(name));
  const auto& dec = oracle_decoder(name);
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  const std::uint64_t total = std::uint64_t{1} << (2 * c.n);
  for (std::uint64_t k = 0; k < total; ++k) {
    const std::string p = oracle::from_index(k, c.n);
    double w = 1;
    for (char ch : p) w *= probs[std::string("IXYZ").find(ch)];
    if (w == 0) continue;
    r += w * oracle::ptm_from_kraus(oracle::kraus(c, dec, [&](const oracle::Vec& v) { return oracle::act(p, v); }));
  }
  return r;
}

Eigen::Matrix4d pauli_channel_ptm(double px, double py, double pz) {
  return Eigen::Vector4d(1, 1 - 2 * (py + pz), 1 - 2 * (px + pz), 1 - 2 * (px + py)).asDiagonal();
}

bool even_css(const StabilizerCode& c) {
  for (const auto& s : c.stabilizer_gens)
    if ((s.x_bits() && s.z_bits()) || s.weight() % 2) return false;
  return true;
}

}  // namespace

class ChannelOracle : public ::testing::TestWithParam<std::string> {};

TEST_P(ChannelOracle, MatchesDenseKrausReference) {
  const std::string name = GetParam();
  const auto& s = sim(name);
  const int n = s.code().n;
  std::vector<PauliOp> ws{PauliOp(n), PauliOp::single(n, 'X', 1), PauliOp::single(n, 'Y', 2),
                          compose(PauliOp::single(n, 'X', 1), PauliOp::single(n, 'X', n))};
  for (double theta : {0.1, 0.37, 1.1})
    for (const auto& w : ws)
      EXPECT_LT(max_diff(s.effective_channel(GlobalZRotation{theta}, w).m, oracle_channel(name, theta, w)), 1e-10)
          << name << " theta=" << theta << " W=" << w.to_indexed();
}

TEST_P(ChannelOracle, StateAndDensityRoutesAgree) {
  const auto& s = sim(GetParam());
  const int n = s.code().n;
  for (double theta : {0.05, 0.6})
    for (const auto& w : {PauliOp(n), PauliOp::single(n, 'X', 2)})
      EXPECT_LT(max_diff(s.effective_channel(GlobalZRotation{theta}, w).m,
                         s.effective_channel_dense(GlobalZRotation{theta}, w).m),
                1e-10);
}

TEST_P(ChannelOracle, StabilizerConjugationIsTrivial) {
  const auto& s = sim(GetParam());
  const int n = s.code().n;
  const PauliOp w = PauliOp::single(n, 'X', 1);
  const LogicalPTM ref = s.effective_channel(GlobalZRotation{0.3}, w);
  for (const auto& g : s.code().stabilizer_gens)
    EXPECT_LT(max_diff(s.effective_channel(GlobalZRotation{0.3}, compose(w, g)).m, ref.m), 1e-10);
}

TEST_P(ChannelOracle, IdentityAtZeroAngle) {
  const auto& s = sim(GetParam());
  EXPECT_LT(max_diff(s.effective_channel(GlobalZRotation{0.0}, PauliOp(s.code().n)).m, Eigen::Matrix4d::Identity()),
            1e-12);
}

TEST_P(ChannelOracle, DecompositionRebuildsChannel) {
  const auto& s = sim(GetParam());
  if (!even_css(s.code())) GTEST_SKIP() << "syndromes do not all leave a logical Z rotation";
  const int n = s.code().n;
  for (double theta : {0.2, 0.7}) {
    const auto d = s.syndrome_decomposition(theta, PauliOp::single(n, 'X', 1));
    EXPECT_NEAR(d.total_probability(), 1.0, 1e-12);
    EXPECT_LT(max_diff(reconstruct_ptm(d).m, s.effective_channel(GlobalZRotation{theta}, PauliOp::single(n, 'X', 1)).m),
              1e-10);
    const auto neg = s.syndrome_decomposition(-theta, PauliOp::single(n, 'X', 1));
    ASSERT_EQ(neg.entries.size(), d.entries.size());
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
      EXPECT_EQ(neg.entries[i].syndrome.bits, d.entries[i].syndrome.bits);
      EXPECT_NEAR(neg.entries[i].probability, d.entries[i].probability, 1e-12);
      EXPECT_NEAR(neg.entries[i].phi, -d.entries[i].phi, 1e-10);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, ChannelOracle, ::testing::Values("five_qubit", "steane", "shor_z", "shor_x", "surface3"));

TEST(ChannelSim, GlobalZExpansionCoefficient) {
  // Coefficient of Z1 Z2 in prod_j (cos t - i sin t Z_j) on seven qubits.
  const int n = 7;
  const double t = 0.3;
  const auto d = global_z_phases(n, t);
  cplx coeff = 0;
  for (std::size_t i = 0; i < d.size(); ++i) coeff += d[i] * parity_sign(i & 0b11);
  coeff /= static_cast<double>(d.size());
  const cplx expect = std::pow(cplx(0, -std::sin(t)), 2) * std::pow(std::cos(t), 5);
  EXPECT_NEAR(std::abs(coeff - expect), 0.0, 1e-14);
}

TEST(ChannelSim, HalfPiIsLogicalZ) {
  for (const char* name : {"steane", "five_qubit"}) {
    const auto& s = sim(name);
    ASSERT_EQ(s.code().logical_z, parse_pauli(std::string(s.code().n, 'Z')));
    const LogicalPTM t = s.effective_channel(GlobalZRotation{kPi / 2}, PauliOp(s.code().n));
    EXPECT_LT(max_diff(t.m, Eigen::Vector4d(1, -1, -1, 1).asDiagonal().toDenseMatrix()), 1e-10) << name;
  }
}

// Code words of one logical value share the phase at pi/4, so nothing leaves the code space.
TEST(ChannelSim, SteaneQuarterPiSyndromes) {
  const auto d = sim("steane").syndrome_decomposition(kPi / 4, PauliOp(7));
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_TRUE(d.entries[0].syndrome.is_trivial());
  EXPECT_NEAR(d.entries[0].probability, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(d.entries[0].phi), kPi / 2, 1e-10);
  EXPECT_NEAR(reconstruct_ptm(d).fidelity(), 2.0 / 3, 1e-12);
  // X1 conjugation leaves a deterministic Z1 instead.
  const auto x1 = sim("steane").syndrome_decomposition(kPi / 4, parse_pauli("X1", 7));
  ASSERT_EQ(x1.entries.size(), 1u);
  EXPECT_EQ(x1.entries[0].syndrome.to_string(), "100000");
}

TEST(ChannelSim, SteaneDecompositionAgainstReference) {
  const auto c = to_oracle(registry("steane"));
  const auto ks = oracle::kraus(c, oracle_decoder("steane"), [&](const oracle::Vec& v) { return oracle::global_z(7, 0.2, v); });
  const auto d = sim("steane").syndrome_decomposition(0.2, PauliOp(7));
  std::size_t seen = 0;
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const double p = 0.5 * ks[m].squaredNorm();
    if (p < 1e-20) continue;
    ASSERT_LT(seen, d.entries.size());
    const auto& e = d.entries[seen++];
    EXPECT_EQ(e.syndrome.bits, m);
    EXPECT_NEAR(e.probability, p, 1e-12);
    EXPECT_NEAR(e.phi, std::arg(ks[m](1, 1) * std::conj(ks[m](0, 0))), 1e-10);
  }
  EXPECT_EQ(seen, d.entries.size());
}

TEST(ChannelSim, FiveQubitQuarterPiAgainstReference) {
  const double f = sim("five_qubit").effective_channel(GlobalZRotation{kPi / 4}, PauliOp(5)).fidelity();
  EXPECT_NEAR(f, oracle::fidelity(oracle_channel("five_qubit", kPi / 4, PauliOp(5))), 1e-12);
  EXPECT_NEAR(f, 11.0 / 24, 1e-12);
}

TEST(ChannelSim, SteaneConjugationHelps) {
  const auto& s = sim("steane");
  EXPECT_GT(s.effective_channel(GlobalZRotation{0.3}, parse_pauli("X1", 7)).fidelity(),
            s.effective_channel(GlobalZRotation{0.3}, PauliOp(7)).fidelity());
}

TEST(ChannelSim, TracePreservingAndUnital) {
  std::mt19937_64 rng(3);
  for (const auto& name : registry_names()) {
    const auto& s = sim(name);
    const int n = s.code().n;
    const PauliOp w(n, rng() & PauliOp::mask(n), rng() & PauliOp::mask(n));
    const LogicalPTM t = s.effective_channel(GlobalZRotation{0.45}, w);
    EXPECT_NEAR(t(0, 0), 1.0, 1e-12);
    for (int k = 1; k < 4; ++k) {
      EXPECT_NEAR(t(0, k), 0.0, 1e-12);
      EXPECT_NEAR(t(k, 0), 0.0, 1e-10);
    }
    EXPECT_TRUE(is_completely_positive(t.m, 1e-10));
    EXPECT_GE(t.fidelity(), 0.0);
    EXPECT_LE(t.fidelity(), 1.0 + 1e-12);
  }
}

TEST(ChannelSim, ProductDephasingMatchesReference) {
  const double p = 0.07;
  const Noise noise = ProductChannel{pauli_channel_ptm(0, 0, p)};
  const Eigen::Matrix4d ref = oracle_pauli_channel("steane", {1 - p, 0, 0, p});
  const auto& s = sim("steane");
  EXPECT_LT(max_diff(s.effective_channel(noise, PauliOp(7)).m, ref), 1e-10);
  EXPECT_LT(max_diff(s.effective_channel_dense(noise, PauliOp(7)).m, ref), 1e-10);
}

TEST(ChannelSim, ProductPauliChannelMatchesReference) {
  const std::array<double, 4> probs{0.88, 0.05, 0.03, 0.04};
  const Noise noise = ProductChannel{pauli_channel_ptm(probs[1], probs[2], probs[3])};
  const Eigen::Matrix4d ref = oracle_pauli_channel("five_qubit", probs);
  EXPECT_LT(max_diff(sim("five_qubit").effective_channel(noise, PauliOp(5)).m, ref), 1e-10);
}

TEST(ChannelSim, DensityStaysPhysical) {
  const auto& s = sim("steane");
  for (const auto& in : s.tomography_inputs()) {
    DensityMatrix dm = DensityMatrix::pure(7, in);
    EXPECT_NO_THROW(dm.check());
    global_z_state_map(7, 0.4)(dm);
    for (int q = 0; q < 7; ++q) apply_qubit_channel(dm, q, pauli_channel_ptm(0.02, 0.01, 0.05));
    EXPECT_NO_THROW(dm.check());
  }
  DensityMatrix bad{1, Eigen::MatrixXcd::Identity(2, 2)};
  EXPECT_THROW(bad.check(), ToleranceError);
}

TEST(ChannelSim, WrongSizeConjugationThrows) {
  EXPECT_THROW(sim("steane").effective_channel(GlobalZRotation{0.1}, PauliOp(5)), DimensionError);
}

TEST(Twirl, SingleMemberIsLogicalTwirlOfChannel) {
  const auto& s = sim("steane");
  const LogicalPTM e = s.effective_channel(GlobalZRotation{0.3}, PauliOp(7));
  const LogicalPTM t = twirled_channel(s, GlobalZRotation{0.3}, {PauliOp(7)});
  EXPECT_LT(max_diff(t.m, logical_pauli_twirl(e).m), 1e-14);
  EXPECT_NEAR(t.fidelity(), e.fidelity(), 1e-14);
  EXPECT_THROW(twirled_channel(s, GlobalZRotation{0.3}, {}), DimensionError);
}

TEST(Twirl, LogicalPauliTwirlKeepsDiagonal) {
  LogicalPTM e;
  e.m << 1, 0, 0, 0, 0.1, 0.5, 0.2, 0.3, -0.2, 0.4, 0.6, 0.1, 0.05, 0.3, -0.1, 0.7;
  const LogicalPTM t = logical_pauli_twirl(e);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(t(r, c), r == c ? e(r, c) : 0.0, 1e-15);
}

// Averaging over every Pauli on the code qubits equals the reduced-set twirl.
TEST(Twirl, FullPauliGroupEqualsReducedSet) {
  const auto& s = sim("steane");
  const Noise noise = GlobalZRotation{0.25};
  LogicalPTM full;
  full.m.setZero();
  for (std::uint64_t x = 0; x < 128; ++x) full.m += s.effective_channel(noise, PauliOp(7, x, 0)).m;
  full.m /= 128;
  full = logical_pauli_twirl(full);
  std::vector<PauliOp> reduced;
  for (std::uint64_t k = 0; k < 8; ++k) reduced.push_back(PauliOp(7, k, 0));
  const LogicalPTM t = twirled_channel(s, noise, reduced);
  EXPECT_LT(max_diff(t.m, full.m), 1e-10);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) EXPECT_NEAR(t(r, c), 0.0, 1e-12);
}
