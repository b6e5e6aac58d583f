#include <gtest/gtest.h>

#include <array>
#include <climits>
#include <set>

#include "quasitile.hpp"

using namespace quasitile;

namespace {

const GroupSpec Z1 = GroupSpec::zd(1);
const GroupSpec Z2 = GroupSpec::zd(2);
const GroupSpec H3 = GroupSpec::heisenberg();

// Independent oracle: (a,b,c) as the unipotent matrix [[1,a,c],[0,1,b],[0,0,1]].
using Mat = std::array<std::array<std::int64_t, 3>, 3>;
Mat as_matrix(const GroupElement& g) { return {{{1, g[0], g[2]}, {0, 1, g[1]}, {0, 0, 1}}}; }
Mat matmul(const Mat& x, const Mat& y) {
  Mat r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}
GroupElement from_matrix(const Mat& m) { return {m[0][1], m[1][2], m[0][2]}; }

GroupElement random_element(const GroupSpec& G, Rng& rng, std::int64_t r) {
  GroupElement g = GroupElement::zero(G.rank());
  for (std::size_t i = 0; i < G.rank(); ++i) g[i] = rng.range(-r, r);
  return g;
}

}  // namespace

TEST(GroupOp, ZdIsComponentwiseAddition) {
  EXPECT_EQ(group_op(Z2, {1, 2}, {3, 4}, GroupOp::Mul), (GroupElement{4, 6}));
}

TEST(GroupOp, HeisenbergGeneratorsCommutatorCoordinate) {
  EXPECT_EQ(group_op(H3, {1, 0, 0}, {0, 1, 0}, GroupOp::Mul), (GroupElement{1, 1, 1}));
  EXPECT_EQ(group_op(H3, {0, 1, 0}, {1, 0, 0}, GroupOp::Mul), (GroupElement{1, 1, 0}));
}

TEST(GroupOp, InverseOfIdentityIsIdentity) {
  for (const auto& G : {Z1, Z2, GroupSpec::zd(5), H3}) {
    const GroupElement e = group_op(G, identity(G), identity(G), GroupOp::Identity);
    EXPECT_TRUE(is_identity(e));
    EXPECT_EQ(group_op(G, e, e, GroupOp::Inv), e);
  }
}

TEST(GroupOp, HeisenbergMatchesMatrixOracle) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const GroupElement g = random_element(H3, rng, 1000), h = random_element(H3, rng, 1000);
    EXPECT_EQ(multiply(H3, g, h), from_matrix(matmul(as_matrix(g), as_matrix(h))));
    const GroupElement gi = inverse(H3, g);
    EXPECT_EQ(from_matrix(matmul(as_matrix(g), as_matrix(gi))), identity(H3));
  }
}

TEST(GroupOp, AssociativityAndInverses) {
  Rng rng(12);
  for (const auto& G : {Z1, Z2, GroupSpec::zd(3), H3}) {
    for (int i = 0; i < 1000; ++i) {
      const GroupElement g = random_element(G, rng, 1 << 20), h = random_element(G, rng, 1 << 20),
                         k = random_element(G, rng, 1 << 20);
      EXPECT_EQ(multiply(G, multiply(G, g, h), k), multiply(G, g, multiply(G, h, k)));
      EXPECT_TRUE(is_identity(multiply(G, g, inverse(G, g))));
      EXPECT_TRUE(is_identity(multiply(G, inverse(G, g), g)));
    }
  }
}

TEST(GroupOp, OverflowIsAnErrorNotWraparound) {
  EXPECT_THROW(multiply(Z1, {INT64_MAX}, {1}), OverflowError);
  EXPECT_THROW(inverse(Z1, {INT64_MIN}), OverflowError);
  EXPECT_THROW(multiply(H3, {INT64_MAX / 2, 0, 0}, {0, 3, 0}), OverflowError);
  EXPECT_THROW(inverse(H3, {INT64_MAX, INT64_MAX, 0}), OverflowError);
}

TEST(GroupOp, MismatchedGroupIsDomainError) {
  EXPECT_THROW(multiply(Z2, {1, 2}, {1, 2, 3}), DomainError);
  EXPECT_THROW(set_product(FiniteSubset::cube(Z1, 2), FiniteSubset::cube(Z2, 2)), DomainError);
}

TEST(GroupSpecParse, NamesAndErrors) {
  EXPECT_EQ(GroupSpec::parse("z2"), Z2);
  EXPECT_EQ(GroupSpec::parse("Z3"), GroupSpec::zd(3));
  EXPECT_EQ(GroupSpec::parse("h3"), H3);
  EXPECT_EQ(GroupSpec::parse("heisenberg"), H3);
  EXPECT_THROW(GroupSpec::parse("free2"), DomainError);
  EXPECT_THROW(GroupSpec::parse("z0"), DomainError);
  EXPECT_THROW(GroupSpec::zd(static_cast<int>(kMaxRank) + 1), DomainError);
}

TEST(SetProduct, IdentityLeavesSetUnchanged) {
  const FiniteSubset F(Z2, {{3, 1}, {0, 0}, {-2, 5}});
  EXPECT_EQ(set_product(FiniteSubset::singleton(Z2, identity(Z2)), F), F);
}

TEST(SetProduct, IntervalExample) {
  const FiniteSubset EF = set_product(FiniteSubset(Z1, {{0}, {1}}), FiniteSubset(Z1, {{0}, {1}, {2}}));
  EXPECT_EQ(EF, FiniteSubset::box(Z1, {0}, {4}));
  EXPECT_EQ(EF.size(), 4u);
}

TEST(SetProduct, HeisenbergExample) {
  const FiniteSubset EF = set_product(FiniteSubset(H3, {{0, 0, 0}, {1, 0, 0}}), FiniteSubset(H3, {{0, 1, 0}}));
  EXPECT_EQ(EF, FiniteSubset(H3, {{0, 1, 0}, {1, 1, 1}}));
}

TEST(SetProduct, CardinalityBoundsAgainstBruteForce) {
  Rng rng(13);
  for (const auto& G : {Z1, Z2, H3}) {
    for (int i = 0; i < 200; ++i) {
      std::vector<GroupElement> e, f;
      for (auto k = rng.range(1, 6); k-- > 0;) e.push_back(random_element(G, rng, 3));
      for (auto k = rng.range(1, 8); k-- > 0;) f.push_back(random_element(G, rng, 3));
      const FiniteSubset E(G, e), F(G, f);
      const FiniteSubset EF = set_product(E, F);
      EXPECT_GE(EF.size(), std::max(E.size(), F.size()));
      EXPECT_LE(EF.size(), E.size() * F.size());
      // Brute force: every product is present and nothing else.
      std::set<GroupElement> brute;
      for (const auto& a : E)
        for (const auto& b : F) brute.insert(multiply(G, a, b));
      EXPECT_EQ(EF.elements(), std::vector<GroupElement>(brute.begin(), brute.end()));
      const FiniteSubset Einv = set_inverse(E);
      EXPECT_EQ(set_inverse(Einv), E);
    }
  }
}

TEST(Translate, Examples) {
  const FiniteSubset F = FiniteSubset::cube(Z2, 2);
  EXPECT_EQ(translate(F, identity(Z2), Side::Left), F);
  EXPECT_EQ(translate(F, {5, 5}, Side::Right), FiniteSubset(Z2, {{5, 5}, {6, 5}, {5, 6}, {6, 6}}));
  const FiniteSubset H(H3, {{0, 0, 0}, {1, 0, 0}});
  EXPECT_EQ(translate(H, {0, 1, 0}, Side::Right), FiniteSubset(H3, {{0, 1, 0}, {1, 1, 1}}));
  EXPECT_EQ(translate(H, {0, 1, 0}, Side::Left), FiniteSubset(H3, {{0, 1, 0}, {1, 1, 0}}));
}

TEST(Translate, CancellationPreservesSize) {
  Rng rng(14);
  for (const auto& G : {Z2, H3})
    for (int i = 0; i < 300; ++i) {
      std::vector<GroupElement> f;
      for (auto k = rng.range(1, 12); k-- > 0;) f.push_back(random_element(G, rng, 4));
      const FiniteSubset F(G, f);
      const GroupElement g = random_element(G, rng, 50);
      EXPECT_EQ(translate(F, g, Side::Left).size(), F.size());
      EXPECT_EQ(translate(F, g, Side::Right).size(), F.size());
    }
}

TEST(FiniteSubset, CanonicalOrderAndDeterministicIteration) {
  const FiniteSubset F(Z2, {{1, 0}, {0, 5}, {0, -1}, {1, 0}});
  ASSERT_EQ(F.size(), 3u);
  EXPECT_EQ(F[0], (GroupElement{0, -1}));
  EXPECT_EQ(F[1], (GroupElement{0, 5}));
  EXPECT_EQ(F[2], (GroupElement{1, 0}));
  std::vector<GroupElement> first(F.begin(), F.end()), second(F.begin(), F.end());
  EXPECT_EQ(first, second);
}

TEST(FiniteSubset, BoxFastPathAgreesWithBinarySearch) {
  const FiniteSubset B = FiniteSubset::box(Z2, {-2, 3}, {4, 7});
  EXPECT_TRUE(B.is_box());
  EXPECT_EQ(B.size(), 24u);
  // The same elements passed as a plain list are still recognised as a box; one fewer is not.
  std::vector<GroupElement> elems = B.elements();
  const FiniteSubset C(Z2, elems);
  EXPECT_TRUE(C.is_box());
  elems.pop_back();
  const FiniteSubset D(Z2, elems);
  EXPECT_FALSE(D.is_box());
  for (std::int64_t x = -4; x < 6; ++x)
    for (std::int64_t y = 1; y < 9; ++y) {
      const GroupElement g{x, y};
      const auto it = std::find(B.begin(), B.end(), g);
      EXPECT_EQ(B.contains(g), it != B.end());
      EXPECT_EQ(B.index_of(g), it == B.end() ? -1 : it - B.begin());
    }
}

TEST(FiniteSubset, SetAlgebra) {
  const FiniteSubset A = FiniteSubset::box(Z1, {0}, {5}), B = FiniteSubset::box(Z1, {3}, {8});
  EXPECT_EQ(set_union(A, B), FiniteSubset::box(Z1, {0}, {8}));
  EXPECT_EQ(set_intersection(A, B), FiniteSubset::box(Z1, {3}, {5}));
  EXPECT_EQ(set_difference(A, B), FiniteSubset::box(Z1, {0}, {3}));
  EXPECT_EQ(intersection_size(A, B), 2);
  EXPECT_TRUE(set_intersection(A, B).is_subset_of(A));
}

TEST(Rational, ParseAndCompare) {
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-2/7"), Rational(-2, 7));
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("6/4").str(), "3/2");
  EXPECT_THROW(Rational::parse("abc"), DomainError);
  EXPECT_THROW(Rational::parse("1/0"), DomainError);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(compare_fraction(1, 3, Rational(1, 3)), 0);
  EXPECT_EQ(compare_fraction(2, 5, Rational(1, 3)), 1);
}
