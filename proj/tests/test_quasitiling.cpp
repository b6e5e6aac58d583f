#include <gtest/gtest.h>

#include <functional>
#include <memory>
#include <set>

#include "quasitile.hpp"
#include "quasitile/verify.hpp"

using namespace quasitile;

namespace {

const GroupSpec Z1 = GroupSpec::zd(1);
const GroupSpec Z2 = GroupSpec::zd(2);
const GroupSpec H3 = GroupSpec::heisenberg();

std::shared_ptr<const Window> interval(std::int64_t lo, std::int64_t hi) {
  return std::make_shared<const Window>(Window::box(Z1, std::vector<std::int64_t>{lo}, std::vector<std::int64_t>{hi}));
}

std::shared_ptr<const Window> cube_window(const GroupSpec& G, std::int64_t n) {
  return std::make_shared<const Window>(Window::cube(G, n));
}

FiniteSubset z1_points(std::initializer_list<std::int64_t> xs) {
  std::vector<GroupElement> v;
  for (auto x : xs) v.push_back({x});
  return FiniteSubset(Z1, v);
}

FiniteSubset z1_grid(std::int64_t lo, std::int64_t hi, std::int64_t step) {
  std::vector<GroupElement> v;
  for (std::int64_t x = lo; x < hi; x += step) v.push_back({x});
  return FiniteSubset(Z1, v);
}

// Oracle: try every assignment of covered elements to one containing tile (or none).
bool brute_eps_disjoint(const Quasitiling& q, const Rational& eps) {
  const auto tiles = q.tiles();
  std::map<std::int64_t, std::vector<std::size_t>> holders;
  for (std::size_t t = 0; t < tiles.size(); ++t)
    for (auto c : tiles[t].cells) holders[c].push_back(t);
  std::vector<std::vector<std::size_t>> choices;
  for (auto& [cell, ts] : holders) choices.push_back(ts);
  std::vector<std::int64_t> kept(tiles.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == choices.size()) {
      for (std::size_t t = 0; t < tiles.size(); ++t) {
        const auto n = static_cast<std::int64_t>(tiles[t].cells.size());
        // |A \ A'| < eps |A|
        if (!(Rational(n - kept[t]) < eps * Rational(n))) return false;
      }
      return true;
    }
    for (auto t : choices[i]) {
      ++kept[t];
      if (go(i + 1)) return true;
      --kept[t];
    }
    return false;  // leaving an element unassigned never helps
  };
  return go(0);
}

// Oracle: for every level j and every g with T_j g ⊆ W, |H_j ∩ T_j g| ≥ ε|T_j| where H_j
// is the union of the tiles of levels ≥ j.
bool brute_maximal(const Quasitiling& q, const Rational& eps) {
  const Window& W = q.window();
  const GroupSpec& G = q.group();
  for (std::size_t j = 0; j < q.levels(); ++j) {
    std::set<GroupElement> H;
    for (std::size_t l = j; l < q.levels(); ++l)
      for (const auto& c : q.center_set(l))
        for (const auto& s : q.shape(l)) H.insert(multiply(G, s, c));
    const FiniteSubset& T = q.shape(j);
    for (const auto& w : W.region()) {
      const GroupElement g = multiply(G, inverse(G, T[0]), w);
      bool inside = true;
      std::int64_t hit = 0;
      for (const auto& t : T) {
        const GroupElement x = multiply(G, t, g);
        inside = inside && W.contains(x);
        hit += H.count(x) ? 1 : 0;
      }
      if (inside && Rational(hit) < eps * Rational(T.ssize())) return false;
    }
  }
  return true;
}

// Oracle for absorption guarantee (a): every tile meeting S lies inside S.
bool brute_no_boundary(const FiniteSubset& S, const Quasitiling& q) {
  for (std::size_t l = 0; l < q.levels(); ++l)
    for (const auto& c : q.center_set(l)) {
      const FiniteSubset tile = translate(q.shape(l), c, Side::Right);
      const auto in = intersection_size(tile, S);
      if (in > 0 && in < tile.ssize()) return false;
    }
  return true;
}

}  // namespace

TEST(RequiredRetention, StrictInequalityEncoding) {
  EXPECT_EQ(required_retention(10, Rational(1, 5)), 9);
  EXPECT_EQ(required_retention(10, Rational(1, 4)), 8);
  EXPECT_EQ(required_retention(1, Rational(1, 2)), 1);
  EXPECT_EQ(required_retention(16, Rational(1)), 1);
}

TEST(EpsDisjoint, DisjointTilesAlwaysPass) {
  const Quasitiling q({FiniteSubset::box(Z1, {0}, {4})}, {z1_grid(0, 12, 4)}, interval(0, 12));
  for (const Rational eps : {Rational(1, 100), Rational(1, 2), Rational(1)}) {
    const auto r = eps_disjoint_check(q, eps);
    ASSERT_TRUE(r.pass);
    ASSERT_TRUE(r.certificate);
    for (auto k : r.certificate->retained) EXPECT_EQ(k, 4);
    EXPECT_TRUE(certificate_valid(q, *r.certificate, eps));
  }
}

TEST(EpsDisjoint, IdenticalSingletonsFail) {
  const FiniteSubset e = FiniteSubset::singleton(Z1, identity(Z1));
  const Quasitiling q({e, e}, {z1_points({3}), z1_points({3})}, interval(0, 5));
  const auto r = eps_disjoint_check(q, Rational(1, 2));
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(brute_eps_disjoint(q, Rational(1, 2)));
  ASSERT_TRUE(r.obstruction);
  EXPECT_GT(r.obstruction->demand, r.obstruction->supply);
  EXPECT_EQ(r.obstruction->demand, 2);
  EXPECT_EQ(r.obstruction->supply, 1);
}

TEST(EpsDisjoint, OverlappingIntervals) {
  const FiniteSubset T = FiniteSubset::box(Z1, {0}, {10});
  const Quasitiling q({T, T}, {z1_points({0}), z1_points({9})}, interval(0, 19));
  const auto r = eps_disjoint_check(q, Rational(1, 5));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(brute_eps_disjoint(q, Rational(1, 5)));
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(certificate_valid(q, *r.certificate, Rational(1, 5)));
  // With a 2-element overlap at ε = 1/10 each tile must keep all 10: infeasible.
  const Quasitiling q2({T, T}, {z1_points({0}), z1_points({8})}, interval(0, 19));
  EXPECT_FALSE(eps_disjoint_check(q2, Rational(1, 10)).pass);
}

TEST(EpsDisjoint, Errors) {
  const Quasitiling q({FiniteSubset::box(Z1, {0}, {4})}, {z1_points({0})}, interval(0, 4));
  EXPECT_THROW(eps_disjoint_check(q, Rational(0)), DomainError);
  EXPECT_THROW(eps_disjoint_check(q, Rational(11, 10)), DomainError);
}

TEST(EpsDisjoint, FlowMatchesBruteForceAssignment) {
  Rng rng(41);
  int passes = 0, fails = 0;
  for (int i = 0; i < 300; ++i) {
    const auto W = interval(0, 14);
    std::vector<FiniteSubset> shapes, centers;
    for (auto k = rng.range(1, 3); k-- > 0;) {
      shapes.push_back(FiniteSubset::box(Z1, {0}, {rng.range(1, 5)}));
      std::vector<GroupElement> c;
      for (auto m = rng.range(1, 3); m-- > 0;) c.push_back({rng.range(0, 14 - shapes.back().ssize())});
      centers.emplace_back(Z1, c);
    }
    const Quasitiling q(shapes, centers, W);
    const Rational eps(rng.range(1, 100), 100);
    const auto r = eps_disjoint_check(q, eps);
    ASSERT_EQ(r.pass, brute_eps_disjoint(q, eps)) << i;
    if (r.pass) {
      ++passes;
      EXPECT_TRUE(certificate_valid(q, *r.certificate, eps));
    } else {
      ++fails;
      ASSERT_TRUE(r.obstruction);
      EXPECT_GT(r.obstruction->demand, r.obstruction->supply);
      EXPECT_EQ(r.obstruction->elements.ssize(), r.obstruction->supply);
    }
  }
  EXPECT_GT(passes, 20);
  EXPECT_GT(fails, 20);
}

TEST(Greedy, Z1Example) {
  const Quasitiling q = greedy_construct(interval(0, 12), {FiniteSubset::box(Z1, {0}, {4})}, Rational(1, 4));
  EXPECT_EQ(q.center_set(0), z1_points({0, 4, 8}));
  EXPECT_EQ(covering_fraction(q), Rational(1));
  EXPECT_TRUE(find_addable_centers(q, Rational(1, 4)).empty());
  EXPECT_TRUE(brute_maximal(q, Rational(1, 4)));
  ASSERT_TRUE(q.meta().maximal);
  EXPECT_TRUE(*q.meta().maximal);
}

TEST(Greedy, Z2NestedBoxes) {
  const Rational eps(1, 4);
  const auto W = cube_window(Z2, 64);
  const Quasitiling q = greedy_construct(W, {FiniteSubset::cube(Z2, 4), FiniteSubset::cube(Z2, 8)}, eps);
  EXPECT_TRUE(eps_disjoint_check(q, eps).pass);
  EXPECT_TRUE(certificate_valid(q, insertion_order_certificate(q), eps));
  EXPECT_GE(covering_fraction(q), covering_bound(eps, 2));
  EXPECT_EQ(covering_bound(eps, 2), Rational(15, 64));
  EXPECT_TRUE(brute_maximal(q, eps));
  ASSERT_TRUE(q.meta().covering);
  EXPECT_EQ(*q.meta().covering, covering_fraction(q));
}

TEST(Greedy, LevelWithNoRoomGetsNoCenters) {
  // Every free spot left by the 3x3 level is narrower than the 1x3 bar, so nothing fits.
  const Quasitiling q = greedy_construct(cube_window(Z2, 3), {FiniteSubset::box(Z2, {0, 0}, {1, 3}), FiniteSubset::cube(Z2, 3)},
                                         Rational(1, 10));
  EXPECT_EQ(q.center_set(1).size(), 1u);
  EXPECT_TRUE(q.center_set(0).empty());
}

TEST(Greedy, RandomRunsMatchIndependentOracles) {
  Rng rng(42);
  for (int i = 0; i < 40; ++i) {
    const GroupSpec G = i % 3 == 0 ? H3 : (i % 3 == 1 ? Z1 : Z2);
    const std::int64_t side = G == Z1 ? rng.range(10, 60) : (G == H3 ? 4 : rng.range(6, 16));
    const auto W = cube_window(G, side);
    std::vector<FiniteSubset> shapes{FiniteSubset::singleton(G, identity(G))};
    std::vector<std::int64_t> ext(G.rank(), 1);
    for (auto k = rng.range(1, 3); k-- > 0;) {
      for (auto& e : ext) e = std::min<std::int64_t>(e + rng.range(0, 2), G == H3 ? 3 : side / 2);
      shapes.push_back(set_union(shapes.back(), verify::detail::box_at(G, std::vector<std::int64_t>(G.rank(), 0), ext)));
    }
    const Rational eps(rng.range(5, 45), 100);
    const Quasitiling q = greedy_construct(W, shapes, eps);
    EXPECT_TRUE(brute_eps_disjoint(q, eps) || q.tile_count() > 14);  // brute force only on small inputs
    EXPECT_TRUE(eps_disjoint_check(q, eps).pass);
    EXPECT_TRUE(brute_maximal(q, eps));
    EXPECT_GE(covering_fraction(q), covering_bound(eps, shapes.size()));
  }
}

TEST(Greedy, Errors) {
  const auto W = interval(0, 12);
  const FiniteSubset T = FiniteSubset::box(Z1, {0}, {4});
  EXPECT_THROW(greedy_construct(W, {T}, Rational(1, 2)), DomainError);
  EXPECT_THROW(greedy_construct(W, {T}, Rational(0)), DomainError);
  EXPECT_THROW(greedy_construct(W, {}, Rational(1, 4)), DomainError);
  EXPECT_THROW(greedy_construct(W, {FiniteSubset::box(Z1, {0}, {20})}, Rational(1, 4)), DomainError);
  EXPECT_THROW(greedy_construct(W, {T, FiniteSubset::box(Z1, {0}, {3})}, Rational(1, 4)), DomainError);
  EXPECT_THROW(greedy_construct(W, {FiniteSubset::box(Z1, {1}, {4})}, Rational(1, 4)), DomainError);
  EXPECT_THROW(greedy_construct(nullptr, {T}, Rational(1, 4)), DomainError);
}

TEST(Disjointify, AlreadyDisjointIsUnchanged) {
  const Quasitiling q({FiniteSubset::box(Z1, {0}, {4})}, {z1_grid(0, 12, 4)}, interval(0, 12));
  const auto d = disjointify(q);
  EXPECT_EQ(d.tiling.shapes(), q.shapes());
  EXPECT_EQ(d.tiling.centers(), q.centers());
}

TEST(Disjointify, Z1OverlapGoesToLaterCenter) {
  const FiniteSubset T = FiniteSubset::box(Z1, {0}, {10});
  const Quasitiling q({T}, {z1_points({0, 9})}, interval(0, 19));
  const auto d = disjointify(q);
  const auto tiles = d.tiling.tiles();
  ASSERT_EQ(tiles.size(), 2u);
  std::vector<FiniteSubset> got;
  for (const auto& t : tiles) {
    std::vector<GroupElement> v;
    for (auto c : t.cells) v.push_back(d.tiling.window().at(static_cast<std::size_t>(c)));
    got.emplace_back(Z1, v);
  }
  EXPECT_EQ(got[0], FiniteSubset::box(Z1, {0}, {9}));
  EXPECT_EQ(got[1], FiniteSubset::box(Z1, {9}, {19}));
  EXPECT_EQ(d.certificate.retained, (std::vector<std::int64_t>{9, 10}));
}

TEST(Disjointify, Z2StripIsSplitDisjointly) {
  const FiniteSubset T = FiniteSubset::cube(Z2, 4);
  const auto W = cube_window(Z2, 8);
  const Quasitiling q({T}, {FiniteSubset(Z2, {{0, 0}, {2, 0}})}, W);
  const auto d = disjointify(q);
  // Brute force: retained tiles are disjoint, lie inside their originals and cover the same union.
  std::set<GroupElement> seen;
  std::int64_t total = 0;
  for (const auto& t : d.tiling.tiles())
    for (auto c : t.cells) {
      EXPECT_TRUE(seen.insert(W->at(static_cast<std::size_t>(c))).second);
      ++total;
    }
  EXPECT_EQ(total, 24);
  EXPECT_EQ(FiniteSubset(Z2, std::vector<GroupElement>(seen.begin(), seen.end())), q.union_set());
  for (const auto& [g, t] : d.certificate.assignment) EXPECT_TRUE(translate(T, q.tiles()[t].center, Side::Right).contains(g));
  EXPECT_EQ(d.certificate.retained[0] + d.certificate.retained[1], 24);
  for (const auto& c : q.center_set(0)) EXPECT_TRUE(seen.count(c));
}

TEST(Disjointify, SharedCenterAcrossLevelsRejected) {
  const auto W = interval(0, 10);
  const Quasitiling q({FiniteSubset::box(Z1, {0}, {2}), FiniteSubset::box(Z1, {0}, {4})}, {z1_points({0}), z1_points({0})}, W);
  EXPECT_THROW(disjointify(q), DomainError);
}

TEST(Disjointify, GreedyRetentionIsNotGuaranteedInGeneral) {
  // Frozen counterexample: the greedy output is ε-disjoint, but the numbering rule leaves
  // a tile with 13 of 16 elements, below 1 - ε = 21/25.
  const auto W = cube_window(Z2, 42);
  const Rational eps(4, 25);
  const auto c = verify::check_greedy(W, {FiniteSubset::cube(Z2, 1), FiniteSubset::cube(Z2, 4)}, eps);
  EXPECT_TRUE(c.construction_ok());
  EXPECT_TRUE(c.disjointify_ok());
  EXPECT_EQ(c.min_retention, Rational(13, 16));
  EXPECT_FALSE(c.retention_ok);
  EXPECT_GT(c.retention_shortfalls, 0);
}

TEST(Disjointify, RandomGreedyOutputsStayDisjointWithCentersKept) {
  Rng rng(43);
  for (int i = 0; i < 30; ++i) {
    const GroupSpec G = i % 2 ? Z2 : H3;
    const auto W = cube_window(G, G == Z2 ? rng.range(8, 20) : 5);
    const std::int64_t a = rng.range(1, 2), b = a + rng.range(0, 2);
    const auto c = verify::check_greedy(W, {FiniteSubset::cube(G, a), FiniteSubset::cube(G, b)}, Rational(rng.range(5, 45), 100));
    EXPECT_TRUE(c.construction_ok());
    EXPECT_TRUE(c.disjointify_ok());
  }
}

TEST(Absorb, NothingMeetsLeavesSetUnchanged) {
  const Quasitiling lower({FiniteSubset::box(Z1, {0}, {2})}, {z1_points({0, 2})}, interval(0, 20));
  const FiniteSubset S = FiniteSubset::box(Z1, {10}, {14});
  const auto r = absorb_lower_tiles(S, lower);
  EXPECT_EQ(r.set, S);
  EXPECT_EQ(r.absorbed_tiles, 0);
}

TEST(Absorb, SingleLevelExample) {
  const Quasitiling lower({FiniteSubset::box(Z1, {0}, {2})}, {z1_grid(0, 20, 2)}, interval(0, 20));
  const FiniteSubset S_tilde = FiniteSubset::box(Z1, {3}, {9});
  const auto r = absorb_lower_tiles(S_tilde, lower);
  EXPECT_EQ(r.set, FiniteSubset::box(Z1, {2}, {10}));
  EXPECT_TRUE(r.no_boundary_tiles);
  EXPECT_TRUE(r.within_spread);
  EXPECT_TRUE(brute_no_boundary(r.set, lower));
  EXPECT_EQ(r.spread_size, 3);
}

TEST(Absorb, TwoLevelsCascade) {
  // Level 1 holds the single tile [4,8); level 0 tiles [2i, 2i+2) everywhere.
  const Quasitiling lower({FiniteSubset::box(Z1, {0}, {2}), FiniteSubset::box(Z1, {0}, {4})},
                          {z1_grid(0, 20, 2), z1_points({4})}, interval(0, 20));
  const FiniteSubset S_tilde = FiniteSubset::box(Z1, {5}, {9});
  const auto r = absorb_lower_tiles(S_tilde, lower);
  EXPECT_EQ(r.set, FiniteSubset::box(Z1, {4}, {10}));
  EXPECT_TRUE(brute_no_boundary(r.set, lower));
  EXPECT_TRUE(r.set.is_subset_of(set_product(FiniteSubset::box(Z1, {-4}, {5}), S_tilde)));
  EXPECT_TRUE(r.within_spread);
}

TEST(Absorb, PreconditionViolations) {
  // Overlapping tiles on one level.
  const Quasitiling overlap({FiniteSubset::box(Z1, {0}, {3})}, {z1_points({0, 2})}, interval(0, 10));
  EXPECT_THROW(absorb_lower_tiles(FiniteSubset::box(Z1, {0}, {1}), overlap), DomainError);
  // A lower tile meeting two higher tiles.
  const Quasitiling straddle({FiniteSubset::box(Z1, {0}, {2}), FiniteSubset::box(Z1, {0}, {4})},
                             {z1_points({3}), z1_points({0, 4})}, interval(0, 10));
  EXPECT_THROW(absorb_lower_tiles(FiniteSubset::box(Z1, {0}, {1}), straddle), DomainError);
}

TEST(Absorb, RandomInstancesSatisfyBothGuarantees) {
  const auto r = verify::absorb_suite({.trials = 30, .seed = 44, .eps = {}, .group = {}});
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_EQ(r.violations, 0);
}

TEST(Marker, Examples) {
  const Window W1(FiniteSubset::box(Z1, {0}, {3}));
  const FiniteSubset F = FiniteSubset::box(Z1, {0}, {3});
  EXPECT_EQ(maximal_marker_set(W1, F).markers, z1_points({0}));

  const Window W = Window::box(Z1, std::vector<std::int64_t>{0}, std::vector<std::int64_t>{20});
  const auto m = maximal_marker_set(W, F);
  EXPECT_EQ(m.markers, z1_points({0, 3, 6, 9, 12, 15}));
  EXPECT_EQ(m.covering, FiniteSubset::box(Z1, {-2}, {3}));
  const auto chk = check_marker_set(W, F, m);
  EXPECT_TRUE(chk.disjoint);
  EXPECT_TRUE(chk.covers_interior);

  const Window W2 = Window::cube(Z2, 16);
  const auto m2 = maximal_marker_set(W2, FiniteSubset::cube(Z2, 3));
  EXPECT_EQ(m2.markers.size(), 25u);
  for (const auto& v : m2.markers) EXPECT_TRUE(v[0] % 3 == 0 && v[1] % 3 == 0);
  const auto chk2 = check_marker_set(W2, FiniteSubset::cube(Z2, 3), m2);
  EXPECT_TRUE(chk2.disjoint);
  EXPECT_TRUE(chk2.covers_interior);
}

TEST(Marker, CheckerDetectsBrokenPackings) {
  const Window W = Window::box(Z1, std::vector<std::int64_t>{0}, std::vector<std::int64_t>{20});
  const FiniteSubset F = FiniteSubset::box(Z1, {0}, {3});
  MarkerResult bad{z1_points({0, 2}), set_product(set_inverse(F), F)};
  EXPECT_FALSE(check_marker_set(W, F, bad).disjoint);
  MarkerResult sparse{z1_points({0}), set_product(set_inverse(F), F)};
  EXPECT_FALSE(check_marker_set(W, F, sparse).covers_interior);
}

TEST(Marker, EmptyInteriorIsDomainError) {
  EXPECT_THROW(maximal_marker_set(Window::cube(Z2, 2), FiniteSubset::cube(Z2, 3)), DomainError);
}

TEST(Marker, HeisenbergPackingIsValid) {
  const Window W = Window::cube(H3, 5);
  const FiniteSubset F(H3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const auto s = verify::check_marker(W, F);
  EXPECT_TRUE(s.disjoint);
  EXPECT_TRUE(s.covers_interior);
  EXPECT_GT(s.markers, 0);
}
