#include <gtest/gtest.h>

#include "pauliconj/concatenation.hpp"
#include "support.hpp"

using namespace pauliconj;

namespace {

const Concatenator& cc(const std::string& name) {
  static std::map<std::string, Concatenator> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, Concatenator(registry(name))).first;
  return it->second;
}

// Logical flip probability of independent dephasing p, by listing every Z string.
double reference_logical_dephasing(const std::string& name, double p) {
  const auto c = to_oracle(registry(name));
  const auto& dec = oracle_decoder(name);
  double pl = 0;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << c.n); ++z) {
    std::string e(c.n, 'I');
    for (int q = 0; q < c.n; ++q)
      if ((z >> q) & 1u) e[q] = 'Z';
    const std::string residual = oracle::product(e, dec.at(oracle::syndrome(c.stabs, e)));
    const int w = oracle::weight(e);
    if (oracle::anticommute(residual, c.lx)) pl += std::pow(p, w) * std::pow(1 - p, c.n - w);
  }
  return pl;
}

const std::vector<std::string> kFamily{"steane", "shor_z", "shor_x", "surface3"};

}  // namespace

TEST(ZChannel, Basics) {
  const ZChannel r = ZChannel::rotation(0.3);
  EXPECT_NEAR(r.a, std::cos(0.6), 1e-15);
  EXPECT_NEAR(r.b, std::sin(0.6), 1e-15);
  EXPECT_TRUE(r.is_cp());
  EXPECT_TRUE(ZChannel::dephasing(0.5).is_cp());
  EXPECT_FALSE((ZChannel{1.0, 0.5, 1.0}).is_cp());
  EXPECT_FALSE((ZChannel{0.2, 0.0, 1.2}).is_cp());
  EXPECT_NEAR(ZChannel::dephasing(0.1).fidelity(), 1 - 2.0 / 3 * 0.1, 1e-15);
  const ZChannelFit f = fit_zchannel(LogicalPTM{r.ptm()});
  EXPECT_NEAR(f.residual, 0.0, 1e-15);
  EXPECT_NEAR(f.channel.b, r.b, 1e-15);
}

TEST(LogicalMap, IdentityIsFixed) {
  for (const auto& name : kFamily) {
    const ZChannel out = logical_map(cc(name).simulator(), ZChannel{});
    EXPECT_NEAR(out.a, 1.0, 1e-12);
    EXPECT_NEAR(out.b, 0.0, 1e-12);
    EXPECT_NEAR(out.c, 1.0, 1e-12);
  }
}

TEST(LogicalMap, RotationMatchesGlobalZChannel) {
  for (const auto& name : kFamily)
    for (double theta : {0.1, 0.4}) {
      const ZChannel out = logical_map(cc(name).simulator(), ZChannel::rotation(theta));
      const Eigen::Matrix4d ref = oracle::global_z_channel(to_oracle(registry(name)), oracle_decoder(name), theta,
                                                           std::string(registry(name).n, 'I'));
      EXPECT_LT((out.ptm() - ref).cwiseAbs().maxCoeff(), 1e-10) << name;
      EXPECT_LE(out.a * out.a + out.b * out.b, 1 + 1e-10);
      EXPECT_LE(out.c, 1 + 1e-10);
    }
}

TEST(LogicalMap, DephasingAgainstStringCount) {
  for (const auto& name : kFamily)
    for (double p : {0.5, 0.1, 0.02}) {
      const ZChannel out = logical_map(cc(name).simulator(), ZChannel::dephasing(p));
      const double pl = reference_logical_dephasing(name, p);
      EXPECT_NEAR(out.a, 1 - 2 * pl, 1e-10) << name << " p=" << p;
      EXPECT_NEAR(out.b, 0.0, 1e-12);
      EXPECT_NEAR(out.fidelity(), 1 - 2.0 / 3 * pl, 1e-10);
    }
}

TEST(LogicalMap, FamilyClosure) {
  for (const auto& name : kFamily)
    for (double r : {1.0, 0.8, 0.3})
      for (double phi : {0.2, 1.0, 2.5}) {
        const ZChannel in{r * std::cos(phi), r * std::sin(phi), 1.0};
        EXPECT_LT(fit_logical_map(cc(name).simulator(), in).residual, 1e-9) << name;
      }
  // Five-qubit recoveries can leave X or Y logicals, which shows up as c < 1.
  const ZChannelFit five = fit_logical_map(cc("five_qubit").simulator(), ZChannel::rotation(0.3));
  EXPECT_LT(five.residual, 1e-9);
  EXPECT_LT(five.channel.c, 1 - 1e-3);
  EXPECT_THROW(logical_map(cc("steane").simulator(), ZChannel{1.0, 0.5, 1.0}), ToleranceError);
}

TEST(Schemes, Parse) {
  EXPECT_EQ(parse_scheme("none", 7).label(), "none");
  EXPECT_EQ(parse_scheme("twirl", 7).label(), "twirl");
  EXPECT_EQ(parse_scheme("conj:X1", 7).label(), "conj:X1");
  EXPECT_EQ(parse_scheme("conj:X1X4X7", 9).w, parse_pauli("X1X4X7", 9));
  EXPECT_THROW(parse_scheme("clifford", 7), LookupError);
  EXPECT_THROW(parse_scheme("conj:X9", 7), DimensionError);
}

TEST(Schemes, LevelOne) {
  const auto& s = cc("steane");
  const ZChannel zero = s.level1(0.0, Scheme::none());
  EXPECT_NEAR(zero.a, 1.0, 1e-12);
  EXPECT_NEAR(zero.b, 0.0, 1e-12);
  for (double theta : {0.05, 0.2, 0.5, 0.7}) {
    EXPECT_NEAR(s.level1(theta, Scheme::twirl()).b, 0.0, 1e-12);
    EXPECT_GT(s.level1(theta, Scheme::conjugation(parse_pauli("X1", 7))).fidelity(),
              s.level1(theta, Scheme::none()).fidelity());
    EXPECT_NEAR(s.level1(theta, Scheme::none()).fidelity(),
                s.simulator().effective_channel(GlobalZRotation{theta}, PauliOp(7)).fidelity(), 1e-12);
  }
}

TEST(Levels, IterationBehaviour) {
  const auto& s = cc("steane");
  const auto zero = iterate_levels(s, 0.0, Scheme::none(), 3);
  ASSERT_EQ(zero.size(), 3u);
  for (const auto& l : zero) EXPECT_NEAR(l.fidelity, 1.0, 1e-12);
  EXPECT_EQ(zero[2].level, 3);
  const auto low = iterate_levels(s, 0.08, Scheme::none(), 3);
  EXPECT_GT(low[1].fidelity, low[0].fidelity);
  EXPECT_GT(low[2].fidelity, low[1].fidelity);
  const auto high = iterate_levels(s, 0.35, Scheme::none(), 3);
  EXPECT_LT(high[1].fidelity, high[0].fidelity);
  EXPECT_LT(high[2].fidelity, high[1].fidelity);
  // Far above threshold every level tends to the fully scrambled value 2/3.
  EXPECT_NEAR(iterate_levels(s, 0.6, Scheme::none(), 3)[2].fidelity, 2.0 / 3, 1e-5);
  EXPECT_THROW(s.fidelities(0.1, Scheme::none(), 0), DimensionError);
}

TEST(Threshold, LevelPairsAgree) {
  // Dephasing has a single parameter, so every level pair crosses at the same point.
  // Coherent residues drift a little between pairs.
  const std::vector<std::tuple<std::string, Scheme, double>> cases{
      {"steane", Scheme::none(), 5e-3}, {"steane", Scheme::twirl(), 1e-4},   {"shor_z", Scheme::none(), 1e-2},
      {"shor_z", Scheme::twirl(), 1e-4}, {"surface3", Scheme::none(), 1e-2}, {"surface3", Scheme::twirl(), 1e-4}};
  for (const auto& [name, scheme, tol] : cases) {
    ThresholdOptions opt;
    const auto a = find_threshold(cc(name), scheme, opt);
    opt.level_low = 2;
    const auto b = find_threshold(cc(name), scheme, opt);
    ASSERT_TRUE(a.found && b.found) << name;
    EXPECT_NEAR(a.theta_star, b.theta_star, tol) << name << " " << scheme.label();
    EXPECT_GT(a.theta_star, 0.0);
    EXPECT_LT(a.theta_star, std::numbers::pi / 4);
    EXPECT_NEAR(a.f_star, cc(name).fidelities(a.theta_star, scheme, 2)[1], 1e-4);
    const auto below = cc(name).fidelities(a.theta_star - 0.01, scheme, 2);
    const auto above = cc(name).fidelities(a.theta_star + 0.01, scheme, 2);
    EXPECT_GT(below[1], below[0]);
    EXPECT_LT(above[1], above[0]);
  }
}

TEST(Threshold, NoCrossingIsReported) {
  ThresholdOptions opt;
  opt.theta_start = 0.01;
  opt.theta_stop = 0.05;
  opt.points = 5;
  const auto r = find_threshold(cc("steane"), Scheme::none(), opt);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.scheme, "none");
  opt.points = 1;
  EXPECT_THROW(find_threshold(cc("steane"), Scheme::none(), opt), DimensionError);
}
