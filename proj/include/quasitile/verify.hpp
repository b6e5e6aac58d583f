#pragma once

// Randomized and fixed-configuration verification suites. Every trial draws from its own
// stream Rng(stream_seed(seed, index)), so results do not depend on thread scheduling;
// suites that need hypothesis-satisfying instances keep the first `trials` qualifying
// attempts in index order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "quasitile/density.hpp"
#include "quasitile/entropy.hpp"
#include "quasitile/folner.hpp"
#include "quasitile/parallel.hpp"
#include "quasitile/quasitiling.hpp"
#include "quasitile/random.hpp"
#include "quasitile/symbolic.hpp"

namespace quasitile::verify {

using Metric = std::variant<std::int64_t, double, bool, std::string>;

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;          // qualifying instances examined
  std::int64_t attempts = 0;        // instances generated (≥ trials when some miss the hypotheses)
  std::int64_t hypotheses_met = 0;
  std::int64_t violations = 0;
  std::vector<std::pair<std::string, Metric>> params;
  std::vector<std::pair<std::string, Metric>> metrics;
  std::vector<std::string> failures;  // the first few violations, described
  bool pass = false;

  void param(std::string k, Metric v) { params.emplace_back(std::move(k), std::move(v)); }
  void metric(std::string k, Metric v) { metrics.emplace_back(std::move(k), std::move(v)); }
};

struct SuiteOptions {
  std::int64_t trials = 0;            // 0 selects the suite default
  std::uint64_t seed = 1;
  std::optional<Rational> eps;        // fixed ε (γ for large-core); random per trial otherwise
  std::optional<GroupSpec> group;     // restrict to one group; otherwise the suite's mix
};

inline constexpr std::size_t kMaxReportedFailures = 5;

/// Outcome of one generated instance.
struct Trial {
  bool hypothesis = true;
  bool violation = false;
  double margin = std::numeric_limits<double>::infinity();  // slack of the checked inequality
  bool flag = false;                                         // suite-specific secondary event
  std::string note;
};

namespace detail {

inline std::string str(const GroupElement& g) {
  std::string s = "[";
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
  return s + "]";
}

inline Rational random_rational(Rng& rng, std::int64_t lo_pct, std::int64_t hi_pct) {
  return Rational(rng.range(lo_pct, hi_pct), 100);
}

inline GroupSpec pick_group(const SuiteOptions& o, std::int64_t index, const std::vector<GroupSpec>& mix,
                            const std::string& suite) {
  if (o.group) {
    if (std::find(mix.begin(), mix.end(), *o.group) == mix.end())
      throw DomainError("suite '" + suite + "' does not support group " + o.group->name());
    return *o.group;
  }
  return mix[static_cast<std::size_t>(index) % mix.size()];
}

/// Box [lo, lo+side) in every coordinate.
inline FiniteSubset box_at(const GroupSpec& G, const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& side) {
  std::vector<std::int64_t> hi(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) hi[i] = lo[i] + side[i];
  return FiniteSubset::box(G, lo, hi);
}

inline FiniteSubset cube_at(const GroupSpec& G, std::int64_t lo, std::int64_t side) {
  return box_at(G, std::vector<std::int64_t>(G.rank(), lo), std::vector<std::int64_t>(G.rank(), side));
}

/// e together with up to `extra` distinct random elements with coordinates in [-r, r].
inline FiniteSubset random_neighbourhood(const GroupSpec& G, Rng& rng, std::int64_t extra, std::int64_t r) {
  std::vector<GroupElement> out{identity(G)};
  for (std::int64_t i = 0; i < extra; ++i) {
    GroupElement g = GroupElement::zero(G.rank());
    for (std::size_t c = 0; c < G.rank(); ++c) g[c] = rng.range(-r, r);
    out.push_back(g);
  }
  return FiniteSubset(G, std::move(out));
}

/// Smallest L with (∏(L + ext_i) - L^d) ≤ δ L^d, i.e. a cube of side L is (B, δ)-invariant for
/// a box B with extents ext_i + 1 containing e.
inline std::int64_t min_invariant_side(const std::vector<std::int64_t>& ext, const Rational& delta) {
  auto ok = [&](std::int64_t L) {
    __int128 prod = 1, base = 1;
    for (auto e : ext) {
      prod *= L + e;
      base *= L;
    }
    return static_cast<__int128>(prod - base) * delta.den() <= static_cast<__int128>(delta.num()) * base;
  };
  std::int64_t hi = 1;
  while (!ok(hi)) hi *= 2;
  std::int64_t lo = hi / 2;  // ok(lo) false or lo == 0
  while (hi - lo > 1) {
    std::int64_t mid = (lo + hi) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Runs gen(index, rng) until `required` attempts satisfy the hypotheses (or max_attempts
/// is reached), in batches executed in parallel. The kept outcomes are exactly the first
/// qualifying ones in index order.
template <class Gen>
std::vector<Trial> collect(std::int64_t required, std::int64_t max_attempts, std::uint64_t seed, Gen gen,
                           std::int64_t& attempts) {
  std::vector<Trial> kept;
  attempts = 0;
  std::int64_t start = 0;
  const std::int64_t batch = std::max<std::int64_t>(16, std::min<std::int64_t>(required, 256));
  while (static_cast<std::int64_t>(kept.size()) < required && start < max_attempts) {
    const std::int64_t end = std::min(max_attempts, start + batch);
    std::vector<Trial> out(static_cast<std::size_t>(end - start));
    parallel_for(out.size(), [&](std::size_t i) {
      const auto index = start + static_cast<std::int64_t>(i);
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(index)));
      out[i] = gen(index, rng);
    });
    for (std::size_t i = 0; i < out.size() && static_cast<std::int64_t>(kept.size()) < required; ++i) {
      attempts = start + static_cast<std::int64_t>(i) + 1;
      if (out[i].hypothesis) kept.push_back(std::move(out[i]));
    }
    start = end;
  }
  return kept;
}

inline void summarize(SuiteResult& r, const std::vector<Trial>& trials, std::int64_t required) {
  r.trials = static_cast<std::int64_t>(trials.size());
  r.hypotheses_met = r.trials;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) {
    worst = std::min(worst, t.margin);
    if (t.violation) {
      ++r.violations;
      if (r.failures.size() < kMaxReportedFailures) r.failures.push_back(t.note);
    }
  }
  if (std::isfinite(worst)) r.metric("min_margin", worst);
  r.pass = r.violations == 0 && r.trials == required;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Følner defect of the generator cross: exactly 2d/n for [0,n)^d in Z^d.
// ---------------------------------------------------------------------------

inline FiniteSubset generator_cross(const GroupSpec& G) {
  std::vector<GroupElement> out{identity(G)};
  const std::size_t gens = G.kind() == GroupSpec::Kind::Zd ? G.rank() : 2;
  for (std::size_t i = 0; i < gens; ++i)
    for (std::int64_t s : {1, -1}) {
      GroupElement g = identity(G);
      g[i] = s;
      out.push_back(g);
    }
  return FiniteSubset(G, std::move(out));
}

inline SuiteResult folner_defect_suite(const SuiteOptions& o) {
  const GroupSpec G = o.group.value_or(GroupSpec::zd(2));
  SuiteResult r;
  r.name = "folner-defect";
  r.seed = o.seed;
  const FolnerFamily fam(G);
  const FiniteSubset E = generator_cross(G);
  r.param("group", G.name());
  if (G.kind() == GroupSpec::Kind::Zd) {
    const std::int64_t n_max = o.trials > 0 ? o.trials : 100;
    r.param("n_max", n_max);
    const auto d = static_cast<std::int64_t>(G.rank());
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const Rational got = invariance_defect(fam.set(n), E);
      const Rational want(2 * d, n);
      if (got != want) {
        ++r.violations;
        if (r.failures.size() < kMaxReportedFailures)
          r.failures.push_back("n=" + std::to_string(n) + ": defect " + got.str() + " != " + want.str());
      }
    }
    r.trials = r.attempts = r.hypotheses_met = n_max;
    r.metric("closed_form", std::string(std::to_string(2 * d) + "/n"));
  } else {
    // Heisenberg: defect must strictly decrease along n = 2, 4, 8, ...
    const std::int64_t steps = o.trials > 0 ? o.trials : 3;
    r.param("doublings", steps);
    Rational prev = invariance_defect(fam.set(2), E);
    std::string seq = "n=2:" + prev.str();
    std::int64_t n = 2;
    for (std::int64_t s = 1; s < steps; ++s) {
      n *= 2;
      const Rational cur = invariance_defect(fam.set(n), E);
      seq += " n=" + std::to_string(n) + ":" + cur.str();
      if (!(cur < prev)) {
        ++r.violations;
        r.failures.push_back("defect did not decrease at n=" + std::to_string(n));
      }
      prev = cur;
    }
    r.trials = r.attempts = r.hypotheses_met = steps;
    r.metric("defects", seq);
  }
  r.pass = r.violations == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Core lemma: defect(F,E) ≤ ε/|E| ⟹ |F_E| ≥ (1-ε)|F|.
// ---------------------------------------------------------------------------

inline Trial core_lemma_trial(const GroupSpec& G, Rng& rng, const std::optional<Rational>& fixed_eps) {
  const bool one_d = G.rank() == 1;
  const Rational eps = fixed_eps ? *fixed_eps : detail::random_rational(rng, one_d ? 10 : 20, one_d ? 95 : 90);
  const FiniteSubset E = detail::random_neighbourhood(G, rng, rng.range(0, 3), one_d ? 2 : 1);

  // Side of a cube that is just about invariant enough, scaled by a random factor in
  // [0.8, 1.5] so that a share of instances falls outside the hypothesis.
  std::vector<std::int64_t> ext(G.rank(), 0);
  for (std::size_t c = 0; c < G.rank(); ++c) {
    std::int64_t lo = 0, hi = 0;
    for (const auto& g : E) {
      lo = std::min(lo, g[c]);
      hi = std::max(hi, g[c]);
    }
    ext[c] = hi - lo;
  }
  const Rational delta = eps / Rational(E.ssize());
  std::int64_t side = detail::min_invariant_side(ext, delta);
  side = std::max<std::int64_t>(1, side * rng.range(80, 150) / 100);
  if (E.size() == 1) side = rng.range(1, 20);

  std::vector<std::int64_t> lo(G.rank());
  for (auto& v : lo) v = rng.range(-50, 50);
  FiniteSubset F = detail::box_at(G, lo, std::vector<std::int64_t>(G.rank(), side));
  // Perturb: punch holes or add stray points.
  const auto mode = rng.below(3);
  if (mode == 1 && F.size() > 3) {
    std::vector<GroupElement> elems = F.elements();
    for (auto k = rng.range(1, 3); k-- > 0 && elems.size() > 1;)
      elems.erase(elems.begin() + static_cast<std::ptrdiff_t>(rng.below(elems.size())));
    F = FiniteSubset(G, std::move(elems));
  } else if (mode == 2) {
    std::vector<GroupElement> elems = F.elements();
    for (auto k = rng.range(1, 3); k-- > 0;) {
      GroupElement g = GroupElement::zero(G.rank());
      for (std::size_t c = 0; c < G.rank(); ++c) g[c] = lo[c] + rng.range(-2, side + 1);
      elems.push_back(g);
    }
    F = FiniteSubset(G, std::move(elems));
  }

  const CoreLemmaReport rep = check_core_lemma(E, eps, F);
  Trial t;
  t.hypothesis = rep.hypothesis_met;
  t.violation = !rep.pass;
  t.margin = (rep.core_fraction - (Rational(1) - eps)).to_double();
  if (t.violation)
    t.note = G.name() + " |E|=" + std::to_string(E.size()) + " |F|=" + std::to_string(F.size()) + " eps=" + eps.str() +
             " core_fraction=" + rep.core_fraction.str();
  return t;
}

inline SuiteResult core_lemma_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 1000;
  SuiteResult r;
  r.name = "core-lemma";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2"));
  r.param("eps", o.eps ? o.eps->str() : std::string("random"));
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2)};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required * 20, o.seed,
      [&](std::int64_t i, Rng& rng) { return core_lemma_trial(detail::pick_group(o, i, mix, r.name), rng, o.eps); },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  r.metric("vacuous_attempts", attempts - r.trials);
  return r;
}

// ---------------------------------------------------------------------------
// Core composition: (F_E)_D = F_{ED} for e ∈ E, e ∈ D.
// ---------------------------------------------------------------------------

inline Trial core_composition_trial(const GroupSpec& G, Rng& rng) {
  const bool heis = G.kind() == GroupSpec::Kind::Heisenberg3;
  const std::int64_t side = heis ? rng.range(3, 7) : rng.range(4, 14);
  const double keep = rng.below(4) == 0 ? 1.0 : 0.6 + 0.38 * rng.uniform01();
  std::vector<GroupElement> elems;
  for (const auto& g : FiniteSubset::cube(G, side))
    if (rng.uniform01() < keep) elems.push_back(g);
  const FiniteSubset F(G, std::move(elems));
  const std::int64_t r = heis ? 1 : 2;
  const FiniteSubset E = detail::random_neighbourhood(G, rng, rng.range(0, 3), r);
  const FiniteSubset D = detail::random_neighbourhood(G, rng, rng.range(0, 3), r);
  const FiniteSubset lhs = e_core(e_core(F, E), D);
  const FiniteSubset rhs = e_core(F, set_product(E, D));
  Trial t;
  t.violation = !(lhs == rhs);
  t.margin = t.violation ? -1.0 : 0.0;
  t.flag = !lhs.empty();
  if (t.violation)
    t.note = G.name() + " |F|=" + std::to_string(F.size()) + " |(F_E)_D|=" + std::to_string(lhs.size()) +
             " |F_ED|=" + std::to_string(rhs.size());
  return t;
}

inline SuiteResult core_composition_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 500;
  SuiteResult r;
  r.name = "core-composition";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z2"));
  const std::vector<GroupSpec> mix{GroupSpec::zd(2), GroupSpec::zd(1), GroupSpec::heisenberg()};
  const GroupSpec G = o.group.value_or(GroupSpec::zd(2));
  detail::pick_group({0, 0, {}, G}, 0, mix, r.name);
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required, o.seed, [&](std::int64_t, Rng& rng) { return core_composition_trial(G, rng); }, attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  r.metrics.clear();
  std::int64_t nonempty = 0;
  for (const auto& t : trials) nonempty += t.flag ? 1 : 0;
  r.metric("nonempty_cores", nonempty);
  return r;
}

// ---------------------------------------------------------------------------
// Greedy quasitiling and disjointification.
// ---------------------------------------------------------------------------

struct QuasitilingCheck {
  std::int64_t tiles = 0;
  std::vector<std::int64_t> tiles_per_level;
  Rational covering;
  Rational bound;
  bool covering_ok = false;
  bool eps_disjoint = false;           // exact flow decision
  bool insertion_certificate = false;  // insertion-order witness is valid
  std::int64_t addable_centers = 0;
  bool maximal = false;
  // disjointify
  bool disjoint_after = false;
  bool centers_retained = false;
  Rational min_retention;
  bool retention_ok = false;
  std::int64_t retention_shortfalls = 0;

  bool construction_ok() const { return eps_disjoint && insertion_certificate && maximal && covering_ok; }
  bool disjointify_ok() const { return disjoint_after && centers_retained; }
};

/// Builds the greedy quasitiling and runs every exhaustive check on it and on its
/// disjointification.
inline QuasitilingCheck check_greedy(const std::shared_ptr<const Window>& W, const std::vector<FiniteSubset>& shapes,
                                     const Rational& eps, Quasitiling* built = nullptr) {
  const Quasitiling q = greedy_construct(W, shapes, eps);
  QuasitilingCheck c;
  const std::vector<Tile> tiles = q.tiles();
  c.tiles = static_cast<std::int64_t>(tiles.size());
  for (std::size_t i = 0; i < q.levels(); ++i) c.tiles_per_level.push_back(q.center_set(i).ssize());
  c.covering = covering_fraction(q);
  c.bound = covering_bound(eps, shapes.size());
  c.covering_ok = c.covering >= c.bound;
  c.eps_disjoint = eps_disjoint_check(q, eps).pass;
  c.insertion_certificate = certificate_valid(q, insertion_order_certificate(q), eps);
  c.addable_centers = static_cast<std::int64_t>(find_addable_centers(q, eps).size());
  c.maximal = c.addable_centers == 0;

  const DisjointifyResult d = disjointify(q);
  const std::vector<Tile> out_tiles = d.tiling.tiles();
  c.disjoint_after = tiles_pairwise_disjoint(out_tiles, W->size()) && out_tiles.size() == tiles.size();
  // Every center keeps itself.
  c.centers_retained = true;
  std::vector<std::int64_t> owner(W->size(), -1);
  for (const auto& [g, t] : d.certificate.assignment) owner[static_cast<std::size_t>(W->index_of(g))] = static_cast<std::int64_t>(t);
  for (std::size_t t = 0; t < tiles.size(); ++t)
    if (owner[static_cast<std::size_t>(W->index_of(tiles[t].center))] != static_cast<std::int64_t>(t))
      c.centers_retained = false;
  c.min_retention = Rational(1);
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Rational f(d.certificate.retained[t], static_cast<std::int64_t>(tiles[t].cells.size()));
    c.min_retention = std::min(c.min_retention, f);
    if (f < Rational(1) - eps) ++c.retention_shortfalls;
  }
  c.retention_ok = c.retention_shortfalls == 0;
  if (built) *built = q;
  return c;
}

inline Trial quasitiling_trial(const GroupSpec& G, Rng& rng, const std::optional<Rational>& fixed_eps) {
  const Rational eps = fixed_eps ? *fixed_eps : detail::random_rational(rng, 5, 45);
  const auto k = static_cast<std::size_t>(rng.range(1, 3));
  std::vector<FiniteSubset> shapes;
  std::shared_ptr<const Window> W;
  if (G.kind() == GroupSpec::Kind::Heisenberg3) {
    std::int64_t s = 1;
    for (std::size_t i = 0; i < k; ++i) {
      s += rng.range(0, 1);
      shapes.push_back(FiniteSubset::box(G, {0, 0, 0}, {s, s, s}));
    }
    const std::int64_t n = s + rng.range(3, 7);
    W = std::make_shared<const Window>(FiniteSubset::box(G, {0, 0, 0}, {n, n, n * n}));
  } else {
    std::int64_t s = 0;
    const std::int64_t step = G.rank() == 1 ? 6 : 3;
    for (std::size_t i = 0; i < k; ++i) {
      s += rng.range(1, step);
      shapes.push_back(FiniteSubset::cube(G, s));
    }
    const std::int64_t n = G.rank() == 1 ? s + rng.range(10, 400) : s + rng.range(4, 48);
    W = std::make_shared<const Window>(FiniteSubset::cube(G, n));
  }
  const QuasitilingCheck c = check_greedy(W, shapes, eps);
  Trial t;
  t.violation = !c.construction_ok() || !c.disjointify_ok();
  t.margin = (c.covering - c.bound).to_double();
  t.flag = !c.retention_ok;
  if (t.violation)
    t.note = G.name() + " window=" + std::to_string(W->size()) + " k=" + std::to_string(k) + " eps=" + eps.str() +
             " eps_disjoint=" + std::to_string(c.eps_disjoint) + " maximal=" + std::to_string(c.maximal) +
             " covering=" + c.covering.str() + " disjoint_after=" + std::to_string(c.disjoint_after);
  return t;
}

inline SuiteResult quasitiling_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 200;
  SuiteResult r;
  r.name = "quasitiling";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2+h3"));
  r.param("eps", o.eps ? o.eps->str() : std::string("random"));
  if (o.eps && (*o.eps <= Rational(0) || *o.eps >= Rational(1, 2))) throw DomainError("eps must lie in (0, 1/2)");
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::heisenberg()};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required, o.seed,
      [&](std::int64_t i, Rng& rng) { return quasitiling_trial(detail::pick_group(o, i, mix, r.name), rng, o.eps); },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  std::int64_t shortfalls = 0;
  for (const auto& t : trials) shortfalls += t.flag ? 1 : 0;
  // Retention ≥ 1-ε after disjointification is reported, not asserted, for arbitrary inputs.
  r.metric("runs_with_retention_below_1_minus_eps", shortfalls);
  return r;
}

// ---------------------------------------------------------------------------
// Marker packing.
// ---------------------------------------------------------------------------

struct MarkerSummary {
  std::int64_t markers = 0;
  std::int64_t interior = 0;
  bool disjoint = false;
  bool covers_interior = false;
};

inline MarkerSummary check_marker(const Window& W, const FiniteSubset& F) {
  const MarkerResult m = maximal_marker_set(W, F);
  const MarkerCheck c = check_marker_set(W, F, m);
  return {m.markers.ssize(), interior(W, F).ssize(), c.disjoint, c.covers_interior};
}

inline SuiteResult marker_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 100;
  SuiteResult r;
  r.name = "marker";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2+h3"));
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::heisenberg()};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required, o.seed,
      [&](std::int64_t i, Rng& rng) {
        const GroupSpec G = detail::pick_group(o, i, mix, r.name);
        FiniteSubset F(G);
        std::shared_ptr<const Window> W;
        if (G.kind() == GroupSpec::Kind::Heisenberg3) {
          const std::int64_t s = rng.range(1, 3);
          F = FiniteSubset::box(G, {0, 0, 0}, {s, s, rng.range(1, 3)});
          const std::int64_t n = rng.range(4, 9);
          W = std::make_shared<const Window>(FiniteSubset::box(G, {0, 0, 0}, {n, n, n * n}));
        } else {
          // Random shape: a box with a few random extra points, always containing e.
          std::vector<GroupElement> elems = detail::cube_at(G, 0, rng.range(1, 4)).elements();
          for (auto k = rng.range(0, 2); k-- > 0;) {
            GroupElement g = GroupElement::zero(G.rank());
            for (std::size_t c = 0; c < G.rank(); ++c) g[c] = rng.range(-2, 5);
            elems.push_back(g);
          }
          F = FiniteSubset(G, std::move(elems));
          W = std::make_shared<const Window>(FiniteSubset::cube(G, G.rank() == 1 ? rng.range(12, 300) : rng.range(12, 48)));
        }
        const MarkerSummary s = check_marker(*W, F);
        Trial t;
        t.violation = !(s.disjoint && s.covers_interior);
        t.margin = 0.0;
        if (t.violation) t.note = G.name() + " |F|=" + std::to_string(F.size()) + " |W|=" + std::to_string(W->size());
        return t;
      },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  r.metrics.clear();
  return r;
}

// ---------------------------------------------------------------------------
// Small-boundary lemma.
// ---------------------------------------------------------------------------

inline Trial boundary_lemma_trial(const GroupSpec& G, Rng& rng, const std::optional<Rational>& fixed_eps) {
  const std::size_t d = G.rank();
  const Rational eps = fixed_eps ? *fixed_eps : detail::random_rational(rng, d == 1 ? 30 : 50, 95);
  // Nested boxes anchored at e; the top one has sides ≤ 5 (Z) or ≤ 2 (Z^2).
  const std::int64_t max_side = d == 1 ? 5 : 2;
  std::vector<std::int64_t> top(d);
  for (auto& s : top) s = rng.range(1, max_side);
  const auto k = static_cast<std::size_t>(rng.range(1, 3));
  std::vector<FiniteSubset> shapes;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::int64_t> side(d);
    for (std::size_t c = 0; c < d; ++c)
      side[c] = i + 1 == k ? top[c] : std::max<std::int64_t>(1, top[c] - static_cast<std::int64_t>(k - 1 - i));
    shapes.push_back(detail::box_at(G, std::vector<std::int64_t>(d, 0), side));
  }
  for (std::size_t i = 1; i < shapes.size(); ++i)  // keep only strictly growing levels
    if (shapes[i] == shapes[i - 1]) {
      shapes.erase(shapes.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    }

  // Smallest cube side L whose cube is (T_k T_k⁻¹, δ)-invariant, plus up to 20%.
  std::int64_t top_size = 1;
  std::int64_t spread_size = 1;
  std::vector<std::int64_t> ext(d);
  for (std::size_t c = 0; c < d; ++c) {
    top_size *= top[c];
    spread_size *= 2 * top[c] - 1;
    ext[c] = 2 * (top[c] - 1);
  }
  const Rational delta = eps / Rational(top_size) / Rational(spread_size);
  std::int64_t L = detail::min_invariant_side(ext, delta);
  L += rng.range(0, L / 5);
  std::vector<std::int64_t> f_lo(d);
  for (auto& v : f_lo) v = rng.range(-20, 20);
  const FiniteSubset F = detail::box_at(G, f_lo, std::vector<std::int64_t>(d, L));
  const std::int64_t margin = max_side + rng.range(0, 2 * max_side);
  std::vector<std::int64_t> w_lo(d), w_side(d);
  for (std::size_t c = 0; c < d; ++c) {
    w_lo[c] = f_lo[c] - margin;
    w_side[c] = L + 2 * margin;
  }
  auto W = std::make_shared<const Window>(detail::box_at(G, w_lo, w_side));

  // Random, possibly overlapping, tiles anywhere in the window.
  std::vector<FiniteSubset> centers;
  for (const auto& T : shapes) {
    const FiniteSubset inner = interior(*W, T);
    const double density = 0.1 + 0.9 * rng.uniform01();
    const auto count = static_cast<std::int64_t>(density * static_cast<double>(W->size()) / static_cast<double>(T.size()));
    std::vector<GroupElement> cs;
    for (std::int64_t j = 0; j < count; ++j) cs.push_back(inner[rng.below(inner.size())]);
    centers.emplace_back(G, std::move(cs));
  }
  const Quasitiling q(shapes, centers, W);
  const BoundaryLemmaReport rep = check_boundary_lemma(q, F, eps);
  Trial t;
  t.hypothesis = rep.hypothesis_met;
  t.violation = !rep.pass;
  t.margin = (eps - rep.boundary_mass).to_double();
  t.flag = rep.boundary_tiles > 0;
  if (t.violation)
    t.note = G.name() + " L=" + std::to_string(L) + " eps=" + eps.str() + " mass=" + rep.boundary_mass.str();
  return t;
}

inline SuiteResult boundary_lemma_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 200;
  SuiteResult r;
  r.name = "boundary-lemma";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2"));
  r.param("eps", o.eps ? o.eps->str() : std::string("random"));
  if (o.eps && (*o.eps <= Rational(0) || *o.eps > Rational(1))) throw DomainError("eps must lie in (0,1]");
  if (o.eps && o.eps->to_double() < 0.25 && (!o.group || o.group->rank() > 1))
    throw DomainError("eps below 0.25 makes the Z^2 instances exceed desk scale; use --group z1");
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2)};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required * 4, o.seed,
      [&](std::int64_t i, Rng& rng) { return boundary_lemma_trial(detail::pick_group(o, i, mix, r.name), rng, o.eps); },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  std::int64_t with_boundary = 0;
  for (const auto& t : trials) with_boundary += t.flag ? 1 : 0;
  r.metric("instances_with_boundary_tiles", with_boundary);
  return r;
}

// ---------------------------------------------------------------------------
// Large-core lemma (windowed).
// ---------------------------------------------------------------------------

inline Trial large_core_trial(const GroupSpec& G, Rng& rng, const std::optional<Rational>& fixed_gamma) {
  const std::size_t d = G.rank();
  const Rational gamma = fixed_gamma ? *fixed_gamma : detail::random_rational(rng, 30, 60);
  const auto k = static_cast<std::size_t>(rng.range(1, 2));
  const std::int64_t max_side = d == 1 ? 8 : 4;
  std::vector<FiniteSubset> shapes, cores;
  std::int64_t u = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t s = rng.range(2, max_side);
    u = std::max(u, s);
    shapes.push_back(FiniteSubset::cube(G, s));
    // Drop up to ⌊0.6 γ |E_i|⌋ random elements.
    const Rational cap = Rational(3, 5) * gamma * Rational(shapes.back().ssize());
    const std::int64_t drop = rng.range(0, cap.num() / cap.den());
    std::vector<GroupElement> elems = shapes.back().elements();
    for (std::int64_t j = 0; j < drop; ++j) elems.erase(elems.begin() + static_cast<std::ptrdiff_t>(rng.below(elems.size())));
    cores.emplace_back(G, std::move(elems));
  }
  // Slack s = min core fraction - (1-γ); choose the test cube so that its
  // UU⁻¹-boundary fraction b stays below s.
  Rational slack = gamma;
  for (std::size_t i = 0; i < k; ++i)
    slack = std::min(slack, Rational(cores[i].ssize(), shapes[i].ssize()) - (Rational(1) - gamma));
  // b = 1 - ((n - 2(u-1))/n)^d < s  ⟸ n large; search directly.
  std::int64_t n = 2 * (u - 1) + 1;
  auto frac = [&](std::int64_t m) {
    __int128 in = 1, all = 1;
    for (std::size_t c = 0; c < d; ++c) {
      in *= m - 2 * (u - 1);
      all *= m;
    }
    return Rational(static_cast<std::int64_t>(all - in), static_cast<std::int64_t>(all));
  };
  while (!(frac(n) < slack)) n += std::max<std::int64_t>(1, n / 8);
  n += rng.range(0, n / 10);
  const FiniteSubset F_test = FiniteSubset::cube(G, n);

  // Grid cells of size u + gap; each holds at most one tile.
  const std::int64_t gap = rng.range(0, 2);
  const std::int64_t cell = u + gap;
  const std::int64_t cells_per_axis = n / cell + rng.range(2, 4);
  const std::int64_t wn = cells_per_axis * cell;
  auto W = std::make_shared<const Window>(FiniteSubset::cube(G, wn));
  const double p_empty = 0.4 * rng.uniform01();
  std::vector<std::vector<GroupElement>> cs(k);
  std::vector<std::int64_t> idx(d, 0);
  while (true) {
    if (rng.uniform01() >= p_empty) {
      GroupElement c = GroupElement::zero(d);
      for (std::size_t a = 0; a < d; ++a) c[a] = idx[a] * cell + (gap > 0 ? rng.range(0, gap) : 0);
      cs[rng.below(k)].push_back(c);
    }
    std::size_t a = d;
    while (a > 0 && ++idx[a - 1] == cells_per_axis) idx[--a] = 0;
    if (a == 0) break;
  }
  std::vector<FiniteSubset> centers;
  for (auto& v : cs) centers.emplace_back(G, std::move(v));
  const LargeCoreReport rep = check_large_core(shapes, cores, centers, gamma, F_test, *W);
  Trial t;
  t.hypothesis = rep.hypotheses_met;
  t.violation = !rep.pass;
  t.margin = (gamma - rep.difference).to_double();
  if (t.violation)
    t.note = G.name() + " gamma=" + gamma.str() + " difference=" + rep.difference.str() + " n=" + std::to_string(n);
  return t;
}

inline SuiteResult large_core_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 200;
  SuiteResult r;
  r.name = "large-core";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2"));
  r.param("gamma", o.eps ? o.eps->str() : std::string("random"));
  if (o.eps && (o.eps->to_double() < 0.2 || *o.eps >= Rational(1)))
    throw DomainError("gamma must lie in [0.2, 1) for desk-scale instances");
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2)};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required * 4, o.seed,
      [&](std::int64_t i, Rng& rng) { return large_core_trial(detail::pick_group(o, i, mix, r.name), rng, o.eps); },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  return r;
}

// ---------------------------------------------------------------------------
// Tile absorption.
// ---------------------------------------------------------------------------

inline Trial absorb_trial(const GroupSpec& G, Rng& rng) {
  const std::size_t d = G.rank();
  const std::int64_t s = rng.range(1, 3);
  const std::int64_t m = rng.range(2, 3);
  const std::int64_t B = s * m;
  const std::int64_t q = rng.range(4, d == 1 ? 20 : 7);
  const std::int64_t wn = B * q;
  auto W = std::make_shared<const Window>(FiniteSubset::cube(G, wn));

  // Aligned grids: small tiles on sZ^d, big tiles on a phase-shifted BZ^d + s·φ.
  std::vector<std::int64_t> phase(d);
  for (auto& p : phase) p = s * rng.range(0, m - 1);
  const double p_small = 0.2 + 0.7 * rng.uniform01();
  const double p_big = 0.2 + 0.7 * rng.uniform01();
  std::vector<GroupElement> small_c, big_c;
  const FiniteSubset small = FiniteSubset::cube(G, s);
  const FiniteSubset big = FiniteSubset::cube(G, B);
  for (const auto& g : W->region()) {
    bool on_small = true, on_big = true;
    for (std::size_t a = 0; a < d; ++a) {
      on_small = on_small && g[a] % s == 0;
      on_big = on_big && (g[a] - phase[a]) % B == 0;
    }
    if (on_small && rng.uniform01() < p_small && !W->translate_indices(small, g).empty()) small_c.push_back(g);
    if (on_big && rng.uniform01() < p_big && !W->translate_indices(big, g).empty()) big_c.push_back(g);
  }
  // Shared centers across levels are allowed here; the construction only uses tiles.
  const Quasitiling lower({small, big}, {FiniteSubset(G, std::move(small_c)), FiniteSubset(G, std::move(big_c))}, W);

  // S~: union of 1-3 random boxes inside the window.
  std::vector<GroupElement> st;
  for (auto b = rng.range(1, 3); b-- > 0;) {
    std::vector<std::int64_t> lo(d), side(d);
    for (std::size_t a = 0; a < d; ++a) {
      side[a] = rng.range(1, std::max<std::int64_t>(1, wn / 3));
      lo[a] = rng.range(0, wn - side[a]);
    }
    for (const auto& g : detail::box_at(G, lo, side)) st.push_back(g);
  }
  const FiniteSubset S_tilde(G, std::move(st));
  const AbsorbResult res = absorb_lower_tiles(S_tilde, lower);

  // Independent exhaustive checks.
  bool contains_input = S_tilde.is_subset_of(res.set);
  bool no_boundary = true;
  for (std::size_t l = 0; l < lower.levels(); ++l)
    for (const auto& c : lower.center_set(l)) {
      const FiniteSubset tile = translate(lower.shape(l), c, Side::Right);
      const std::int64_t hit = intersection_size(tile, res.set);
      if (hit != 0 && hit != tile.ssize()) no_boundary = false;
    }
  const FiniteSubset E = set_product(set_product(small, set_inverse(small)), set_product(big, set_inverse(big)));
  const bool within = res.set.is_subset_of(set_product(E, S_tilde));

  Trial t;
  t.violation = !(contains_input && no_boundary && within && res.no_boundary_tiles && res.within_spread);
  t.margin = 0.0;
  t.flag = res.absorbed_tiles > 0;
  if (t.violation)
    t.note = G.name() + " s=" + std::to_string(s) + " B=" + std::to_string(B) + " |S~|=" + std::to_string(S_tilde.size()) +
             " no_boundary=" + std::to_string(no_boundary) + " within=" + std::to_string(within);
  return t;
}

inline SuiteResult absorb_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 100;
  SuiteResult r;
  r.name = "absorb";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z2"));
  const std::vector<GroupSpec> mix{GroupSpec::zd(2), GroupSpec::zd(1)};
  const GroupSpec G = o.group.value_or(GroupSpec::zd(2));
  detail::pick_group({0, 0, {}, G}, 0, mix, r.name);
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required, o.seed, [&](std::int64_t, Rng& rng) { return absorb_trial(G, rng); }, attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  r.metrics.clear();
  std::int64_t absorbing = 0;
  for (const auto& t : trials) absorbing += t.flag ? 1 : 0;
  r.metric("instances_absorbing_tiles", absorbing);
  return r;
}

// ---------------------------------------------------------------------------
// Frequency lemma.
// ---------------------------------------------------------------------------

inline Trial frequency_lemma_trial(const GroupSpec& G, Rng& rng, const std::optional<Rational>& fixed_eps) {
  const std::size_t d = G.rank();
  const Rational eps = fixed_eps ? *fixed_eps : detail::random_rational(rng, d == 1 ? 30 : 50, 90);
  const std::int64_t a = rng.range(1, d == 1 ? 3 : 2);
  const FiniteSubset A = FiniteSubset::cube(G, a);
  const Rational delta = eps / Rational(3) / Rational(A.ssize());
  std::int64_t t_min = std::max<std::int64_t>(2, detail::min_invariant_side(std::vector<std::int64_t>(d, a - 1), delta));
  if (a == 1) t_min = rng.range(2, 12);

  std::vector<FiniteSubset> shapes{FiniteSubset::cube(G, t_min)};
  if (rng.below(2) == 0) {
    // Z^2 tiles sit on a grid sized for the larger shape, so keep the two sizes close.
    const std::int64_t grow = d == 1 ? t_min / 2 + 1 : t_min / 10 + 1;
    shapes.push_back(FiniteSubset::cube(G, t_min + rng.range(1, grow)));
  }
  const std::int64_t t_max = shapes.back().box_hi()[0];
  // Gaps small enough that coverage of F stays ≥ 1 - 2ε/3 in the bulk.
  const std::int64_t g_max = std::max<std::int64_t>(0, (Rational(t_min) * eps / Rational(8)).num() /
                                                           (Rational(t_min) * eps / Rational(8)).den());

  std::shared_ptr<const Window> W;
  FiniteSubset F(G);
  std::vector<std::vector<GroupElement>> cs(shapes.size());
  if (d == 1) {
    const std::int64_t len = (Rational(12 * t_max) / eps).num() / (Rational(12 * t_max) / eps).den() + rng.range(0, 200);
    const std::int64_t margin = rng.range(0, t_max);
    W = std::make_shared<const Window>(FiniteSubset::box(G, {-margin}, {len + margin}));
    F = FiniteSubset::box(G, {0}, {len});
    std::int64_t pos = -margin + rng.range(0, t_max);
    while (true) {
      const std::size_t lvl = rng.below(shapes.size());
      const std::int64_t t = shapes[lvl].box_hi()[0];
      if (pos + t > len + margin) break;
      cs[lvl].push_back({pos});
      pos += t + rng.range(0, g_max);
    }
  } else {
    // Grid-aligned tiles; F spans whole grid periods, optionally with a ragged edge.
    const std::int64_t gap = rng.range(0, g_max);
    const std::int64_t period = t_max + gap;
    const std::int64_t q = rng.range(2, 3);
    const std::int64_t ragged = rng.below(2) == 0 ? 0 : rng.range(0, std::max<std::int64_t>(1, t_min / 8));
    const std::int64_t side = q * period - gap + ragged;
    W = std::make_shared<const Window>(FiniteSubset::cube(G, q * period + t_max));
    F = FiniteSubset::cube(G, side);
    for (std::int64_t i = 0; i <= q; ++i)
      for (std::int64_t j = 0; j <= q; ++j) {
        const std::size_t lvl = rng.below(shapes.size());
        const GroupElement c{i * period, j * period};
        if (!W->translate_indices(shapes[lvl], c).empty()) cs[lvl].push_back(c);
      }
  }
  std::vector<FiniteSubset> centers;
  for (auto& v : cs) centers.emplace_back(G, std::move(v));
  const Quasitiling q(shapes, centers, W);

  // Configuration: one or two rows with a random-bias Bernoulli row 0.
  const std::int64_t alpha = rng.range(2, 3);
  const auto rows = static_cast<std::size_t>(rng.range(1, 2));
  std::vector<Alphabet> alphabets;
  std::vector<std::vector<std::uint8_t>> values(rows, std::vector<std::uint8_t>(W->size()));
  const double bias = 0.2 + 0.6 * rng.uniform01();
  for (std::size_t r = 0; r < rows; ++r) {
    alphabets.emplace_back(alpha);
    for (auto& v : values[r])
      v = static_cast<std::uint8_t>(rng.uniform01() < bias ? 0 : 1 + rng.below(static_cast<std::uint64_t>(alpha - 1)));
  }
  const Configuration y(W, alphabets, values);
  // Q: the block of y at a random position of F (so that it occurs at least once).
  const FiniteSubset inner = interior(*W, A);
  std::vector<GroupElement> in_f;
  for (const auto& g : interior(Window(F), A)) in_f.push_back(g);
  const GroupElement at = in_f.empty() ? inner[0] : in_f[rng.below(in_f.size())];
  const Pattern Qy = y.restrict(0, translate(A, at, Side::Right));
  const Pattern Q(A, Qy.values(), Qy.alphabet());

  const FrequencyLemmaReport rep = verify_frequency_lemma(y, q, Q, F, eps, 0);
  Trial t;
  t.hypothesis = rep.hypotheses_met;
  t.violation = !rep.pass;
  t.margin = (eps - rep.diff).to_double();
  if (t.violation)
    t.note = G.name() + " eps=" + eps.str() + " diff=" + rep.diff.str() + " coverage=" + rep.coverage.str();
  return t;
}

inline SuiteResult frequency_lemma_suite(const SuiteOptions& o) {
  const std::int64_t required = o.trials > 0 ? o.trials : 200;
  SuiteResult r;
  r.name = "frequency-lemma";
  r.seed = o.seed;
  r.param("trials", required);
  r.param("group", o.group ? o.group->name() : std::string("z1+z2"));
  r.param("eps", o.eps ? o.eps->str() : std::string("random"));
  if (o.eps && (*o.eps <= Rational(0) || *o.eps > Rational(1))) throw DomainError("eps must lie in (0,1]");
  if (o.eps && o.eps->to_double() < 0.25 && (!o.group || o.group->rank() > 1))
    throw DomainError("eps below 0.25 makes the Z^2 instances exceed desk scale; use --group z1");
  const std::vector<GroupSpec> mix{GroupSpec::zd(1), GroupSpec::zd(2)};
  std::int64_t attempts = 0;
  auto trials = detail::collect(
      required, required * 10, o.seed,
      [&](std::int64_t i, Rng& rng) { return frequency_lemma_trial(detail::pick_group(o, i, mix, r.name), rng, o.eps); },
      attempts);
  r.attempts = attempts;
  detail::summarize(r, trials, required);
  r.metric("vacuous_attempts", attempts - r.trials);
  return r;
}

// ---------------------------------------------------------------------------
// Entropy.
// ---------------------------------------------------------------------------

/// Bernoulli(p) configuration on a box window, one row, reproducible from the seed.
inline Configuration sample_bernoulli(const std::shared_ptr<const Window>& W, const Distribution& p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cdf;
  double acc = 0.0;
  for (double w : p.weights()) cdf.push_back(acc += w);
  const bool fair_coin = p.size() == 2 && p.weights()[0] == 0.5;
  std::vector<std::uint8_t> vals(W->size());
  std::uint64_t bits = 0;
  int left = 0;
  for (auto& v : vals) {
    if (fair_coin) {
      if (left == 0) {
        bits = rng.next();
        left = 64;
      }
      v = static_cast<std::uint8_t>(bits & 1);
      bits >>= 1;
      --left;
    } else {
      const double u = rng.uniform01();
      std::size_t s = 0;
      while (s + 1 < cdf.size() && u >= cdf[s]) ++s;
      v = static_cast<std::uint8_t>(s);
    }
  }
  return Configuration(W, {Alphabet(static_cast<std::int64_t>(p.size()))}, {std::move(vals)});
}

/// (x_0 + x_1 + ...) mod 2 on a box window in Z^d.
inline Configuration checkerboard(const std::shared_ptr<const Window>& W) {
  std::vector<std::uint8_t> vals(W->size());
  for (std::size_t i = 0; i < W->size(); ++i) {
    std::int64_t s = 0;
    for (auto c : W->at(i).coords()) s += c;
    vals[i] = static_cast<std::uint8_t>(((s % 2) + 2) % 2);
  }
  return Configuration(W, {Alphabet(2)}, {std::move(vals)});
}

struct EntropyCheck {
  std::int64_t bernoulli_cases = 0;
  double bernoulli_max_error = 0.0;
  double empirical_rate = 0.0;
  double empirical_error = 0.0;
  std::int64_t empirical_samples = 0;
  double checkerboard_rate = 0.0;
  double checkerboard_error = 0.0;
  std::vector<double> checkerboard_sequence;  // F = [0,1)^2, [0,2)^2, [0,3)^2
  bool checkerboard_monotone = false;
};

inline constexpr double kBernoulliTolerance = 1e-10;
inline constexpr double kEmpiricalTolerance = 0.01;
inline constexpr double kCheckerboardTolerance = 1e-12;

inline SuiteResult entropy_suite(const SuiteOptions& o, std::int64_t empirical_side = 512) {
  const std::int64_t cases = o.trials > 0 ? o.trials : 50;
  SuiteResult r;
  r.name = "entropy";
  r.seed = o.seed;
  r.param("bernoulli_cases", cases);
  r.param("empirical_window", empirical_side);
  EntropyCheck c;

  // Exact join entropy against H(p).
  std::vector<double> errors(static_cast<std::size_t>(cases));
  parallel_for(errors.size(), [&](std::size_t i) {
    Rng rng(stream_seed(o.seed, i));
    const auto q = static_cast<std::size_t>(rng.range(2, 5));
    std::vector<double> w(q);
    double sum = 0.0;
    for (auto& x : w) sum += (x = rng.uniform01() + 1e-3);
    if (rng.below(4) == 0) {
      sum -= w[0];
      w[0] = 0.0;
    }
    for (auto& x : w) x /= sum;
    const Distribution p(w);
    const GroupSpec G = rng.below(2) == 0 ? GroupSpec::zd(1) : GroupSpec::zd(2);
    std::vector<GroupElement> cells;
    const auto target = static_cast<std::size_t>(rng.range(1, 9));
    const FiniteSubset pool = G.rank() == 1 ? FiniteSubset::cube(G, 12) : FiniteSubset::cube(G, 4);
    while (FiniteSubset(G, cells).size() < target) cells.push_back(pool[rng.below(pool.size())]);
    const FiniteSubset Fn(G, cells);
    errors[i] = std::fabs(bernoulli_entropy_exact(p, Fn) - shannon_entropy(p));
  });
  c.bernoulli_cases = cases;
  for (double e : errors) {
    c.bernoulli_max_error = std::max(c.bernoulli_max_error, e);
    if (!(e <= kBernoulliTolerance)) ++r.violations;
  }

  // Plug-in rate of a fair-coin configuration.
  const GroupSpec Z2 = GroupSpec::zd(2);
  const FiniteSubset F2 = FiniteSubset::cube(Z2, 2);
  {
    auto W = std::make_shared<const Window>(FiniteSubset::cube(Z2, empirical_side));
    const Configuration y = sample_bernoulli(W, Distribution({0.5, 0.5}), stream_seed(o.seed, 1ULL << 40));
    const EmpiricalEntropyReport rep = empirical_entropy_rate(y, F2);
    c.empirical_rate = rep.h_n_hat;
    c.empirical_samples = rep.sample_count;
    c.empirical_error = std::fabs(rep.h_n_hat - std::numbers::ln2);
    if (!(c.empirical_error <= kEmpiricalTolerance)) {
      ++r.violations;
      r.failures.push_back("empirical rate " + std::to_string(rep.h_n_hat));
    }
  }
  // Checkerboard.
  {
    // Side 33 gives 32² translates of [0,2)², split evenly between the two patterns.
    auto W = std::make_shared<const Window>(FiniteSubset::cube(Z2, 33));
    const Configuration y = checkerboard(W);
    for (std::int64_t s = 1; s <= 3; ++s) c.checkerboard_sequence.push_back(empirical_entropy_rate(y, FiniteSubset::cube(Z2, s)).h_n_hat);
    c.checkerboard_rate = c.checkerboard_sequence[1];
    c.checkerboard_error = std::fabs(c.checkerboard_rate - std::numbers::ln2 / 4);
    c.checkerboard_monotone = c.checkerboard_sequence[1] <= c.checkerboard_sequence[0] &&
                              c.checkerboard_sequence[2] <= c.checkerboard_sequence[1];
    if (!(c.checkerboard_error <= kCheckerboardTolerance)) {
      ++r.violations;
      r.failures.push_back("checkerboard rate " + std::to_string(c.checkerboard_rate));
    }
    if (!c.checkerboard_monotone) {
      ++r.violations;
      r.failures.push_back("checkerboard rates not non-increasing");
    }
  }
  for (std::size_t i = 0; i < errors.size() && r.failures.size() < kMaxReportedFailures; ++i)
    if (!(errors[i] <= kBernoulliTolerance)) r.failures.push_back("bernoulli case " + std::to_string(i));

  r.trials = r.attempts = r.hypotheses_met = cases + 2;
  r.metric("bernoulli_max_abs_error", c.bernoulli_max_error);
  r.metric("empirical_rate", c.empirical_rate);
  r.metric("empirical_abs_error", c.empirical_error);
  r.metric("empirical_samples", c.empirical_samples);
  r.metric("checkerboard_rate", c.checkerboard_rate);
  r.metric("checkerboard_abs_error", c.checkerboard_error);
  r.metric("checkerboard_rates_n1_n2_n3",
           std::to_string(c.checkerboard_sequence[0]) + "," + std::to_string(c.checkerboard_sequence[1]) + "," +
               std::to_string(c.checkerboard_sequence[2]));
  r.pass = r.violations == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"folner-defect", "core-lemma",  "core-composition", "boundary-lemma",
                                              "large-core",    "absorb",      "frequency-lemma",  "quasitiling",
                                              "marker",        "entropy"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, const SuiteOptions& o) {
  if (name == "folner-defect") return folner_defect_suite(o);
  if (name == "core-lemma") return core_lemma_suite(o);
  if (name == "core-composition") return core_composition_suite(o);
  if (name == "boundary-lemma") return boundary_lemma_suite(o);
  if (name == "large-core") return large_core_suite(o);
  if (name == "absorb") return absorb_suite(o);
  if (name == "frequency-lemma") return frequency_lemma_suite(o);
  if (name == "quasitiling") return quasitiling_suite(o);
  if (name == "marker") return marker_suite(o);
  if (name == "entropy") return entropy_suite(o);
  throw DomainError("unknown verification suite '" + name + "'");
}

}  // namespace quasitile::verify
