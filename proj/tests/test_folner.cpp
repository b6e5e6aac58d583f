#include <gtest/gtest.h>

#include <set>

#include "quasitile.hpp"
#include "quasitile/verify.hpp"

using namespace quasitile;

namespace {

const GroupSpec Z1 = GroupSpec::zd(1);
const GroupSpec Z2 = GroupSpec::zd(2);
const GroupSpec H3 = GroupSpec::heisenberg();

// Oracle: |F Δ EF| / |F| from explicit std::set enumeration.
Rational brute_defect(const FiniteSubset& F, const FiniteSubset& E) {
  std::set<GroupElement> f(F.begin(), F.end()), ef;
  for (const auto& g : E)
    for (const auto& x : F) ef.insert(multiply(F.group(), g, x));
  std::int64_t sym = 0;
  for (const auto& x : ef) sym += f.count(x) ? 0 : 1;
  for (const auto& x : f) sym += ef.count(x) ? 0 : 1;
  return Rational(sym, F.ssize());
}

FiniteSubset random_set(const GroupSpec& G, Rng& rng, std::int64_t count, std::int64_t r) {
  std::vector<GroupElement> v;
  for (std::int64_t i = 0; i < count; ++i) {
    GroupElement g = GroupElement::zero(G.rank());
    for (std::size_t c = 0; c < G.rank(); ++c) g[c] = rng.range(-r, r);
    v.push_back(g);
  }
  return FiniteSubset(G, v);
}

}  // namespace

TEST(FolnerSet, Examples) {
  EXPECT_EQ(folner_set(FolnerFamily(Z1), 3), FiniteSubset(Z1, {{0}, {1}, {2}}));
  EXPECT_EQ(folner_set(FolnerFamily(Z2), 2), FiniteSubset(Z2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  const FiniteSubset H = folner_set(FolnerFamily(H3), 2);
  EXPECT_EQ(H.size(), 16u);
  for (const auto& g : H) {
    EXPECT_TRUE(g[0] >= 0 && g[0] < 2 && g[1] >= 0 && g[1] < 2 && g[2] >= 0 && g[2] < 4);
  }
}

TEST(FolnerSet, SizesContainIdentityAndNest) {
  for (const auto& G : {Z1, Z2, GroupSpec::zd(3), H3}) {
    const FolnerFamily fam(G);
    for (std::int64_t n = 1; n <= 8; ++n) {
      const FiniteSubset F = fam.set(n);
      EXPECT_EQ(F.ssize(), fam.size(n));
      std::int64_t want = 1;
      for (std::size_t i = 0; i < (G.kind() == GroupSpec::Kind::Zd ? G.rank() : 4); ++i) want *= n;
      EXPECT_EQ(F.ssize(), want);
      EXPECT_TRUE(F.contains(identity(G)));
      EXPECT_TRUE(F.is_subset_of(fam.set(n + 1)));
    }
  }
}

TEST(FolnerSet, BadIndexAndOverflow) {
  EXPECT_THROW(FolnerFamily(Z2).set(0), DomainError);
  EXPECT_THROW(FolnerFamily(H3).size(std::int64_t{1} << 32), OverflowError);
}

TEST(FolnerSet, ExhaustsTheNonnegativeOrthant) {
  // The boxes [0,n)^2 absorb every g ∈ [0,k]^2 once n > k; elements with a negative
  // coordinate are never reached by this family.
  const FolnerFamily fam(Z2);
  for (std::int64_t k = 0; k <= 6; ++k)
    for (std::int64_t n = k + 1; n <= 2 * k + 6; ++n) {
      const FiniteSubset F = fam.set(n);
      for (std::int64_t x = 0; x <= k; ++x)
        for (std::int64_t y = 0; y <= k; ++y) EXPECT_TRUE(F.contains({x, y}));
    }
  EXPECT_FALSE(fam.set(50).contains({-1, 0}));
}

TEST(InvarianceDefect, Examples) {
  const FiniteSubset e1 = FiniteSubset::singleton(Z2, identity(Z2));
  EXPECT_EQ(invariance_defect(FiniteSubset(Z2, {{4, 1}, {-3, 2}}), e1), Rational(0));
  EXPECT_EQ(invariance_defect(FiniteSubset::box(Z1, {0}, {10}), FiniteSubset(Z1, {{0}, {1}})), Rational(1, 10));
  EXPECT_EQ(invariance_defect(FiniteSubset::cube(Z2, 4), FiniteSubset(Z2, {{0, 0}, {1, 0}})), Rational(1, 4));
  EXPECT_THROW(invariance_defect(FiniteSubset(Z2), e1), DomainError);
}

TEST(InvarianceDefect, MatchesBruteForce) {
  Rng rng(21);
  for (const auto& G : {Z1, Z2, H3})
    for (int i = 0; i < 300; ++i) {
      const FiniteSubset F = random_set(G, rng, rng.range(1, 30), 4);
      const FiniteSubset E = random_set(G, rng, rng.range(1, 5), 2);
      EXPECT_EQ(invariance_defect(F, E), brute_defect(F, E));
    }
}

TEST(InvarianceDefect, CrossDefectIsFourOverN) {
  const FiniteSubset E = verify::generator_cross(Z2);
  const FolnerFamily fam(Z2);
  for (std::int64_t n = 1; n <= 100; ++n) EXPECT_EQ(invariance_defect(fam.set(n), E), Rational(4, n)) << n;
  // Brute-force confirmation at the two points used by the index search.
  EXPECT_EQ(brute_defect(fam.set(7), E), Rational(4, 7));
  EXPECT_EQ(brute_defect(fam.set(8), E), Rational(1, 2));
}

TEST(InvarianceDefect, HeisenbergDefectDecreasesAlongDoublings) {
  const FiniteSubset E = verify::generator_cross(H3);
  const FolnerFamily fam(H3);
  const Rational d2 = brute_defect(fam.set(2), E), d4 = brute_defect(fam.set(4), E), d8 = brute_defect(fam.set(8), E);
  EXPECT_EQ(invariance_defect(fam.set(2), E), d2);
  EXPECT_EQ(invariance_defect(fam.set(8), E), d8);
  EXPECT_GT(d2, d4);
  EXPECT_GT(d4, d8);
}

TEST(InvarianceDefect, SimplerConditionEquivalence) {
  Rng rng(22);
  for (int i = 0; i < 500; ++i) {
    const GroupSpec G = i % 3 == 0 ? H3 : (i % 3 == 1 ? Z1 : Z2);
    const FiniteSubset F = random_set(G, rng, rng.range(1, 25), 3);
    const FiniteSubset E = set_union(random_set(G, rng, rng.range(0, 4), 2), FiniteSubset::singleton(G, identity(G)));
    const Rational delta(rng.range(0, 200), 100);
    const bool by_defect = invariance_defect(F, E) <= delta;
    EXPECT_EQ(by_defect, satisfies_product_bound(F, E, delta));
  }
}

TEST(FindInvariantIndex, Examples) {
  const FolnerFamily fam(Z2);
  EXPECT_EQ(find_invariant_index(fam, FiniteSubset::singleton(Z2, identity(Z2)), Rational(1, 10), 50), 1);
  const FiniteSubset cross = verify::generator_cross(Z2);
  EXPECT_EQ(find_invariant_index(fam, cross, Rational(1, 2), 100), 8);
  EXPECT_EQ(find_invariant_index(fam, cross, Rational(1, 10), 100), 40);
  EXPECT_FALSE(find_invariant_index(fam, cross, Rational(1, 10), 39).has_value());
  EXPECT_THROW(find_invariant_index(fam, cross, Rational(0), 10), DomainError);
  EXPECT_THROW(find_invariant_index(fam, cross, Rational(-1, 3), 10), DomainError);
}
