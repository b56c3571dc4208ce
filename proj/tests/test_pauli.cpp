#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "pauliconj/pauli.hpp"

using namespace pauliconj;

namespace {

PauliOp random_pauli(int n, std::mt19937_64& rng) {
  const std::uint64_t m = PauliOp::mask(n);
  return PauliOp(n, rng() & m, rng() & m);
}

}  // namespace

TEST(Pauli, ComposeExamples) {
  const PauliOp x1 = parse_pauli("X1", 3);
  EXPECT_TRUE(compose(x1, x1).is_identity());
  EXPECT_EQ(compose(x1, parse_pauli("Z1", 3)), parse_pauli("Y1", 3));
  EXPECT_EQ(compose(parse_pauli("XZZXI"), parse_pauli("IXZZX")).to_dense(), "XYIYX");
}

TEST(Pauli, ComposeSizeMismatchThrows) {
  EXPECT_THROW(compose(PauliOp(3), PauliOp(4)), DimensionError);
  EXPECT_THROW(commutes(PauliOp(3), PauliOp(4)), DimensionError);
}

TEST(Pauli, CommutationExamples) {
  EXPECT_EQ(commutes(parse_pauli("X1", 2), parse_pauli("Z1", 2)), -1);
  EXPECT_EQ(commutes(parse_pauli("X1", 2), parse_pauli("Z2", 2)), 1);
  EXPECT_EQ(commutes(parse_pauli("XZZXI"), parse_pauli("ZXIXZ")), 1);
}

TEST(Pauli, WeightExamples) {
  EXPECT_EQ(PauliOp(5).weight(), 0);
  EXPECT_EQ(parse_pauli("X1X4X7", 9).weight(), 3);
  EXPECT_EQ(parse_pauli("XZZXI").weight(), 4);
}

TEST(Pauli, ParsingAndRendering) {
  const PauliOp p = parse_pauli("X1Y3Z9", 9);
  EXPECT_EQ(p.to_dense(), "XIYIIIIIZ");
  EXPECT_EQ(p.to_indexed(), "X1Y3Z9");
  EXPECT_EQ(parse_pauli(p.to_dense()), p);
  EXPECT_EQ(PauliOp(4).to_indexed(), "I");
  EXPECT_EQ(parse_pauli("I", 4), PauliOp(4));
  EXPECT_EQ(parse_pauli("x2", 3), parse_pauli("IXI"));
  EXPECT_THROW(parse_pauli("X10", 9), DimensionError);
  EXPECT_THROW(parse_pauli("Q1", 3), ParseError);
  EXPECT_THROW(parse_pauli("XZ", 3), ParseError);
  EXPECT_THROW(PauliOp::single(3, 'X', 0), DimensionError);
}

TEST(Pauli, SpanExamples) {
  EXPECT_EQ(span({}, 3).size(), 1u);
  const auto s = span({parse_pauli("X1", 2), parse_pauli("X2", 2)}, 2);
  const std::set<std::string> got{s[0].to_dense(), s[1].to_dense(), s[2].to_dense(), s[3].to_dense()};
  EXPECT_EQ(got, (std::set<std::string>{"II", "XI", "IX", "XX"}));
  const auto five = span({parse_pauli("X1", 5), parse_pauli("X2", 5), parse_pauli("Z3", 5), parse_pauli("Z5", 5)}, 5);
  std::set<std::string> distinct;
  for (const auto& p : five) distinct.insert(p.to_dense());
  EXPECT_EQ(distinct.size(), 16u);
}

TEST(Pauli, Independence) {
  EXPECT_TRUE(is_independent({parse_pauli("X1", 2), parse_pauli("Z1", 2)}));
  EXPECT_FALSE(is_independent({parse_pauli("X1", 2), parse_pauli("X2", 2), parse_pauli("X1X2", 2)}));
  std::vector<PauliOp> steane;
  for (const char* s : {"XIIXIXX", "IXIXXIX", "IIXIXXX", "ZIIZIZZ", "IZIZZIZ", "IIZIZZZ"}) steane.push_back(parse_pauli(s));
  EXPECT_TRUE(is_independent(steane));
  EXPECT_EQ(gf2_rank(steane), 6);
}

TEST(Pauli, AlgebraicProperties) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const PauliOp a = random_pauli(n, rng), b = random_pauli(n, rng), c = random_pauli(n, rng);
    EXPECT_EQ(compose(a, b), compose(b, a));
    EXPECT_EQ(compose(a, compose(a, b)), b);
    EXPECT_EQ(commutes(a, compose(b, c)), commutes(a, b) * commutes(a, c));
    EXPECT_EQ(commutes(a, b), commutes(b, a));
    EXPECT_LE(compose(a, b).weight(), a.weight() + b.weight());
    // Against the string reference.
    EXPECT_EQ(commutes(a, b) < 0, oracle::anticommute(a.to_dense(), b.to_dense()));
    EXPECT_EQ(compose(a, b).to_dense(), oracle::product(a.to_dense(), b.to_dense()));
  }
}

TEST(Pauli, SpanSizeIsTwoToTheRank) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const int n = 4;
    std::vector<PauliOp> gens;
    const int k = static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) gens.push_back(random_pauli(n, rng));
    std::set<std::pair<std::uint64_t, std::uint64_t>> distinct;
    for (const auto& p : span(gens, n)) distinct.insert({p.x_bits(), p.z_bits()});
    EXPECT_EQ(distinct.size(), std::size_t{1} << gf2_rank(gens));
  }
}

TEST(Permutation, ClosureAndAction) {
  // (1 2 3) and (1 2) generate S3.
  const Permutation c3{1, 2, 0}, t{1, 0, 2};
  EXPECT_EQ(permutation_closure({c3, t}, 3).size(), 6u);
  EXPECT_EQ(permutation_closure({}, 3).size(), 1u);
  EXPECT_TRUE(is_permutation(c3));
  EXPECT_FALSE(is_permutation({0, 0, 1}));
  EXPECT_EQ(compose_permutations(c3, invert_permutation(c3)), identity_permutation(3));
  // Qubit 1 goes to position 2 under (1 2 3).
  EXPECT_EQ(permute(parse_pauli("XIZ"), c3).to_dense(), "ZXI");
}
