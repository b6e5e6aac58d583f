#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "quasitile/folner.hpp"
#include "quasitile/tiling.hpp"

namespace quasitile {

struct WindowDensity {
  Rational value;
  GroupElement argmin;         // first minimizing translate in canonical order
  std::int64_t interior_size;  // number of translates Fg ⊆ W that were examined
};

namespace detail {

// Z^d with box F and box W: d-dimensional prefix sums make each translate O(2^d).
inline WindowDensity box_density_scan(const std::vector<char>& bits, const FiniteSubset& F, const Window& W,
                                      const FiniteSubset& inner) {
  const std::size_t d = W.group().rank();
  const auto wlo = W.region().box_lo();
  const auto whi = W.region().box_hi();
  std::vector<std::int64_t> ext(d), stride(d);
  std::size_t total = 1;
  for (std::size_t i = d; i-- > 0;) {
    ext[i] = whi[i] - wlo[i] + 1;
    stride[i] = static_cast<std::int64_t>(total);
    total *= static_cast<std::size_t>(ext[i]);
  }
  // P[x] = #marked cells y with y_i < x_i for all i (x in the extended box).
  std::vector<std::int64_t> P(total, 0);
  std::vector<std::int64_t> x(d, 0);
  for (std::size_t cell = 0; cell < bits.size(); ++cell) {
    std::size_t rem = cell, off = 0;
    for (std::size_t i = d; i-- > 0;) {
      const auto n = static_cast<std::size_t>(whi[i] - wlo[i]);
      off += (rem % n + 1) * static_cast<std::size_t>(stride[i]);
      rem /= n;
    }
    P[off] = bits[cell];
  }
  for (std::size_t axis = 0; axis < d; ++axis)
    for (std::size_t off = 0; off < total; ++off)
      if ((static_cast<std::int64_t>(off) / stride[axis]) % ext[axis] > 0) P[off] += P[off - static_cast<std::size_t>(stride[axis])];

  const auto flo = F.box_lo();
  const auto fhi = F.box_hi();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  GroupElement arg;
  for (const auto& g : inner) {
    std::int64_t sum = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::int64_t off = 0;
      int sign = 1;
      for (std::size_t i = 0; i < d; ++i) {
        const bool upper = !((mask >> i) & 1);
        const std::int64_t c = (upper ? fhi[i] : flo[i]) + g[i] - wlo[i];
        if (!upper) sign = -sign;
        off += c * stride[i];
      }
      sum += sign * P[static_cast<std::size_t>(off)];
    }
    if (sum < best) {
      best = sum;
      arg = g;
      if (best == 0) break;
    }
  }
  return {Rational(best, F.ssize()), arg, inner.ssize()};
}

}  // namespace detail

/// min over g ∈ interior(W,F) of |H ∩ Fg| / |F|. Only H ∩ W can matter.
inline WindowDensity lower_density_over_window(const FiniteSubset& H, const FiniteSubset& F, const Window& W) {
  W.region().same_group(H);
  W.region().same_group(F);
  if (F.empty()) throw DomainError("density shape F must be nonempty");
  const FiniteSubset inner = interior(W, F);
  if (inner.empty()) throw DomainError("window is smaller than the shape: interior(W, F) is empty");
  const std::vector<char> bits = W.mark(H);
  if (W.group().abelian() && F.is_box() && W.region().is_box()) return detail::box_density_scan(bits, F, W, inner);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  GroupElement arg;
  for (const auto& g : inner) {
    std::int64_t count = 0;
    for (const auto& f : F) count += bits[static_cast<std::size_t>(W.index_of(multiply(W.group(), f, g)))];
    if (count < best) {
      best = count;
      arg = g;
      if (best == 0) break;
    }
  }
  return {Rational(best, F.ssize()), arg, inner.ssize()};
}

/// F_E = {f ∈ F : Ef ⊆ F}.
inline FiniteSubset e_core(const FiniteSubset& F, const FiniteSubset& E) {
  F.same_group(E);
  std::vector<GroupElement> out;
  for (const auto& f : F) {
    bool inside = true;
    for (const auto& g : E)
      if (!F.contains(multiply(F.group(), g, f))) {
        inside = false;
        break;
      }
    if (inside) out.push_back(f);
  }
  return FiniteSubset(F.group(), std::move(out));
}

struct CoreLemmaReport {
  Rational delta_used;
  Rational defect;
  Rational core_fraction;
  std::int64_t core_size = 0;
  bool hypothesis_met = false;  // defect ≤ ε/|E|
  bool pass = false;            // hypothesis ⟹ |F_E| ≥ (1-ε)|F|
};

/// With δ = ε/|E|: an (E,δ)-invariant F has |F_E| ≥ (1-ε)|F|.
inline CoreLemmaReport check_core_lemma(const FiniteSubset& E, const Rational& eps, const FiniteSubset& F) {
  E.same_group(F);
  if (eps <= Rational(0) || eps >= Rational(1)) throw DomainError("eps must lie in (0,1)");
  if (!E.contains(identity(E.group()))) throw DomainError("E must contain the identity");
  if (F.empty()) throw DomainError("F must be nonempty");
  CoreLemmaReport r;
  r.delta_used = eps / Rational(E.ssize());
  r.defect = invariance_defect(F, E);
  r.core_size = e_core(F, E).ssize();
  r.core_fraction = Rational(r.core_size, F.ssize());
  r.hypothesis_met = r.defect <= r.delta_used;
  r.pass = !r.hypothesis_met || r.core_fraction >= Rational(1) - eps;
  return r;
}

struct BoundaryLemmaReport {
  Rational boundary_mass;  // |E' ∩ F| / |F|, E' = union of tiles lying on the boundary of F
  Rational bound;          // ε
  Rational delta_used;     // ε / (|E_k| · |E_k E_k⁻¹|)
  Rational defect;         // defect(F, E_k E_k⁻¹)
  std::int64_t boundary_tiles = 0;
  bool hypothesis_met = false;
  bool pass = false;
};

/// A set A lies on the boundary of B when it meets both B and its complement.
inline BoundaryLemmaReport check_boundary_lemma(const Quasitiling& tiling, const FiniteSubset& F, const Rational& eps) {
  tiling.window().region().same_group(F);
  if (eps <= Rational(0)) throw DomainError("eps must be positive");
  if (F.empty()) throw DomainError("F must be nonempty");
  if (tiling.levels() == 0) throw DomainError("tiling has no shapes");
  if (!tiling.nested()) throw DomainError("boundary lemma requires nested shapes E_1 ⊆ ... ⊆ E_k");

  const Window& W = tiling.window();
  std::vector<char> boundary_cells(W.size(), 0);
  BoundaryLemmaReport r;
  for (const auto& t : tiling.tiles()) {
    bool in = false, out = false;
    for (auto i : t.cells) (F.contains(W.at(static_cast<std::size_t>(i))) ? in : out) = true;
    if (in && out) {
      ++r.boundary_tiles;
      for (auto i : t.cells) boundary_cells[static_cast<std::size_t>(i)] = 1;
    }
  }
  std::int64_t mass = 0;
  for (std::size_t i = 0; i < boundary_cells.size(); ++i)
    if (boundary_cells[i] && F.contains(W.at(i))) ++mass;

  const FiniteSubset& top = tiling.shapes().back();
  const FiniteSubset spread = set_product(top, set_inverse(top));
  r.boundary_mass = Rational(mass, F.ssize());
  r.bound = eps;
  r.delta_used = eps / Rational(top.ssize()) / Rational(spread.ssize());
  r.defect = invariance_defect(F, spread);
  r.hypothesis_met = r.defect <= r.delta_used;
  r.pass = !r.hypothesis_met || r.boundary_mass < eps;
  return r;
}

struct LargeCoreReport {
  WindowDensity d_e;
  WindowDensity d_eprime;
  Rational difference;      // D_E - D_E'
  Rational boundary_bound;  // |F \ F_{UU⁻¹}| / |F|, U = union of shapes
  Rational core_slack;      // min_i |E'_i|/|E_i| - (1-γ) over used levels
  bool tiles_disjoint = false;
  bool hypotheses_met = false;  // tiles_disjoint && boundary_bound < core_slack
  bool pass = false;            // D_E - D_E' < γ
};

/// Windowed check that shrinking every tile to a large core loses less than γ of
/// lower density.
inline LargeCoreReport check_large_core(const std::vector<FiniteSubset>& shapes, const std::vector<FiniteSubset>& cores,
                                        const std::vector<FiniteSubset>& centers, const Rational& gamma,
                                        const FiniteSubset& F_test, const Window& W) {
  if (shapes.empty() || shapes.size() != cores.size() || shapes.size() != centers.size())
    throw DomainError("shapes, cores and centers must be nonempty lists of equal length");
  if (gamma <= Rational(0)) throw DomainError("gamma must be positive");
  const GroupSpec& G = W.group();
  const Rational keep = Rational(1) - gamma;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    W.region().same_group(shapes[i]);
    if (!cores[i].is_subset_of(shapes[i])) throw DomainError("core " + std::to_string(i) + " is not inside its shape");
    if (compare_fraction(cores[i].ssize(), shapes[i].ssize(), keep) <= 0)
      throw DomainError("core " + std::to_string(i) + " is not a (1-gamma)-subset of its shape");
    for (std::size_t j = 0; j < i; ++j)
      if (intersection_size(centers[i], centers[j]) != 0) throw DomainError("center sets are not pairwise disjoint");
  }

  // Tiles, with within-level disjointness on W enforced.
  std::vector<GroupElement> e_elems, ep_elems;
  std::vector<char> level_seen(W.size(), 0), any_seen(W.size(), 0);
  bool disjoint = true;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    std::fill(level_seen.begin(), level_seen.end(), 0);
    for (const auto& c : centers[i]) {
      for (const auto& s : shapes[i]) {
        GroupElement x = multiply(G, s, c);
        e_elems.push_back(x);
        std::int64_t idx = W.index_of(x);
        if (idx >= 0) {
          auto u = static_cast<std::size_t>(idx);
          if (level_seen[u]) throw DomainError("tiles of level " + std::to_string(i) + " overlap inside the window");
          level_seen[u] = 1;
          if (any_seen[u]) disjoint = false;
          any_seen[u] = 1;
        }
      }
      for (const auto& s : cores[i]) ep_elems.push_back(multiply(G, s, c));
    }
  }
  const FiniteSubset E(G, std::move(e_elems));
  const FiniteSubset Eprime(G, std::move(ep_elems));

  LargeCoreReport r;
  r.d_e = lower_density_over_window(E, F_test, W);
  r.d_eprime = lower_density_over_window(Eprime, F_test, W);
  r.difference = r.d_e.value - r.d_eprime.value;
  r.pass = r.difference < gamma;

  FiniteSubset all_shapes = shapes[0];
  for (std::size_t i = 1; i < shapes.size(); ++i) all_shapes = set_union(all_shapes, shapes[i]);
  const FiniteSubset spread = set_product(all_shapes, set_inverse(all_shapes));
  r.boundary_bound = Rational(F_test.ssize() - e_core(F_test, spread).ssize(), F_test.ssize());
  std::optional<Rational> min_frac;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (centers[i].empty()) continue;
    Rational f(cores[i].ssize(), shapes[i].ssize());
    if (!min_frac || f < *min_frac) min_frac = f;
  }
  r.core_slack = min_frac ? *min_frac - keep : gamma;
  r.tiles_disjoint = disjoint;
  r.hypotheses_met = disjoint && r.boundary_bound < r.core_slack;
  return r;
}

}  // namespace quasitile
