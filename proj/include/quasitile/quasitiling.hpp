#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasitile/density.hpp"
#include "quasitile/detail/max_flow.hpp"
#include "quasitile/tiling.hpp"

namespace quasitile {

// ---------------------------------------------------------------------------
// ε-disjointness
// ---------------------------------------------------------------------------

/// Pairwise disjoint A'_α ⊆ A_α, given as an owner tile for every covered element.
/// Tile indices follow Quasitiling::tiles() order.
struct DisjointnessCertificate {
  std::vector<std::pair<GroupElement, std::size_t>> assignment;  // sorted by element
  std::vector<std::int64_t> retained;
  std::vector<Rational> retained_fraction;
};

/// Hall-type obstruction: the listed tiles jointly demand more elements than they cover.
struct DisjointnessObstruction {
  std::vector<std::size_t> tiles;
  std::int64_t demand = 0;  // Σ required elements over `tiles`
  std::int64_t supply = 0;  // |∪ tiles|
  FiniteSubset elements;    // ∪ tiles
};

struct EpsDisjointResult {
  bool pass = false;
  std::optional<DisjointnessCertificate> certificate;
  std::optional<DisjointnessObstruction> obstruction;
};

/// Least number of elements a tile of size n must keep so that |A \ A'| < ε|A|,
/// i.e. ⌊(1-ε)n⌋ + 1.
inline std::int64_t required_retention(std::int64_t n, const Rational& eps) {
  const Rational x = (Rational(1) - eps) * Rational(n);
  std::int64_t fl = x.num() >= 0 ? x.num() / x.den() : -((-x.num() + x.den() - 1) / x.den());
  return fl + 1;
}

namespace detail {

inline DisjointnessCertificate certificate_from_owner(const std::vector<Tile>& tiles, const Window& W,
                                                      const std::vector<std::int64_t>& owner) {
  DisjointnessCertificate cert;
  cert.retained.assign(tiles.size(), 0);
  for (std::size_t cell = 0; cell < owner.size(); ++cell)
    if (owner[cell] >= 0) {
      cert.assignment.emplace_back(W.at(cell), static_cast<std::size_t>(owner[cell]));
      ++cert.retained[static_cast<std::size_t>(owner[cell])];
    }
  for (std::size_t t = 0; t < tiles.size(); ++t)
    cert.retained_fraction.emplace_back(cert.retained[t], static_cast<std::int64_t>(tiles[t].cells.size()));
  return cert;
}

}  // namespace detail

/// Exact decision of ε-disjointness: a flow network source → tile (capacity = required
/// retention) → covered element (1) → sink (1) is saturated iff suitable A'_α exist.
inline EpsDisjointResult eps_disjoint_check(const Quasitiling& tiling, const Rational& eps) {
  if (eps <= Rational(0) || eps > Rational(1)) throw DomainError("eps must lie in (0,1]");
  const Window& W = tiling.window();
  const std::vector<Tile> tiles = tiling.tiles();

  // Compact numbering of covered cells.
  std::vector<std::int64_t> node_of_cell(W.size(), -1);
  std::vector<std::size_t> cell_of_node;
  for (const auto& t : tiles)
    for (auto c : t.cells)
      if (node_of_cell[static_cast<std::size_t>(c)] < 0) {
        node_of_cell[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(cell_of_node.size());
        cell_of_node.push_back(static_cast<std::size_t>(c));
      }

  const std::size_t source = 0, sink = 1, tile_base = 2, elem_base = 2 + tiles.size();
  detail::MaxFlow net(elem_base + cell_of_node.size());
  std::int64_t total_demand = 0;
  std::vector<std::int64_t> demand(tiles.size());
  std::vector<std::vector<std::size_t>> tile_arcs(tiles.size());
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    demand[t] = required_retention(static_cast<std::int64_t>(tiles[t].cells.size()), eps);
    total_demand += demand[t];
    net.add_edge(source, tile_base + t, demand[t]);
    for (auto c : tiles[t].cells)
      tile_arcs[t].push_back(
          net.add_edge(tile_base + t, elem_base + static_cast<std::size_t>(node_of_cell[static_cast<std::size_t>(c)]), 1));
  }
  for (std::size_t v = 0; v < cell_of_node.size(); ++v) net.add_edge(elem_base + v, sink, 1);

  const std::int64_t flow = net.run(source, sink);
  EpsDisjointResult result;
  result.pass = flow == total_demand;
  if (result.pass) {
    std::vector<std::int64_t> owner(W.size(), -1);
    for (std::size_t t = 0; t < tiles.size(); ++t)
      for (std::size_t k = 0; k < tiles[t].cells.size(); ++k)
        if (net.flow_on(tile_arcs[t][k]) > 0) owner[static_cast<std::size_t>(tiles[t].cells[k])] = static_cast<std::int64_t>(t);
    // Elements the flow left unassigned go to their first containing tile.
    for (std::size_t t = 0; t < tiles.size(); ++t)
      for (auto c : tiles[t].cells)
        if (owner[static_cast<std::size_t>(c)] < 0) owner[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(t);
    result.certificate = detail::certificate_from_owner(tiles, W, owner);
  } else {
    const std::vector<char> side = net.source_side(source);
    DisjointnessObstruction ob{{}, 0, 0, FiniteSubset(W.group())};
    std::vector<char> covered(W.size(), 0);
    for (std::size_t t = 0; t < tiles.size(); ++t)
      if (side[tile_base + t]) {
        ob.tiles.push_back(t);
        ob.demand += demand[t];
        for (auto c : tiles[t].cells) covered[static_cast<std::size_t>(c)] = 1;
      }
    std::vector<GroupElement> elems;
    for (std::size_t c = 0; c < covered.size(); ++c)
      if (covered[c]) elems.push_back(W.at(c));
    ob.supply = static_cast<std::int64_t>(elems.size());
    ob.elements = FiniteSubset(W.group(), std::move(elems));
    result.obstruction = std::move(ob);
  }
  return result;
}

/// Checks that `cert` witnesses ε-disjointness of `tiling`.
inline bool certificate_valid(const Quasitiling& tiling, const DisjointnessCertificate& cert, const Rational& eps) {
  const std::vector<Tile> tiles = tiling.tiles();
  const Window& W = tiling.window();
  if (cert.retained.size() != tiles.size()) return false;
  std::vector<std::int64_t> kept(tiles.size(), 0);
  std::vector<char> seen(W.size(), 0);
  for (const auto& [g, t] : cert.assignment) {
    if (t >= tiles.size()) return false;
    std::int64_t cell = W.index_of(g);
    if (cell < 0 || seen[static_cast<std::size_t>(cell)]) return false;
    seen[static_cast<std::size_t>(cell)] = 1;
    if (!std::binary_search(tiles[t].cells.begin(), tiles[t].cells.end(), cell)) return false;
    ++kept[t];
  }
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const auto n = static_cast<std::int64_t>(tiles[t].cells.size());
    if (kept[t] != cert.retained[t] || kept[t] < required_retention(n, eps)) return false;
  }
  return true;
}

/// Each tile keeps the elements not covered by tiles placed before it, in the greedy
/// placement order: levels from the largest shape down, centers in canonical order.
inline DisjointnessCertificate insertion_order_certificate(const Quasitiling& tiling) {
  const std::vector<Tile> tiles = tiling.tiles();
  std::vector<std::size_t> order(tiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tiles[a].level > tiles[b].level; });
  std::vector<std::int64_t> owner(tiling.window().size(), -1);
  for (std::size_t t : order)
    for (auto c : tiles[t].cells)
      if (owner[static_cast<std::size_t>(c)] < 0) owner[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(t);
  return detail::certificate_from_owner(tiles, tiling.window(), owner);
}

// ---------------------------------------------------------------------------
// Greedy construction
// ---------------------------------------------------------------------------

namespace detail {

// Counts marked cells of Tg, stopping early once `limit` is reached.
inline std::int64_t count_marked(const Window& W, const FiniteSubset& T, const GroupElement& g,
                                 const std::vector<char>& marked, std::int64_t limit) {
  std::int64_t count = 0;
  for (const auto& t : T) {
    count += marked[static_cast<std::size_t>(W.index_of(multiply(W.group(), t, g)))];
    if (count >= limit) break;
  }
  return count;
}

// ⌈ε n⌉: a translate is addable iff fewer than this many of its cells are covered.
inline std::int64_t overlap_limit(std::int64_t n, const Rational& eps) {
  const Rational x = eps * Rational(n);
  return (x.num() + x.den() - 1) / x.den();
}

inline void require_nested_shapes(const std::vector<FiniteSubset>& shapes, const GroupSpec& G) {
  if (shapes.empty()) throw DomainError("at least one shape is required");
  const GroupElement e = identity(G);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (!(shapes[i].group() == G)) throw DomainError("shape group does not match the window");
    if (!shapes[i].contains(e)) throw DomainError("every shape must contain the identity");
    if (i > 0 && !shapes[i - 1].is_subset_of(shapes[i])) throw DomainError("shapes must be nested T_1 ⊆ ... ⊆ T_k");
  }
}

}  // namespace detail

/// Translates at any level that could still be added: g ∈ interior(W,T_j) with
/// |H_j ∩ T_j g| < ε|T_j|, where H_j is the union of tiles of levels ≥ j.
inline std::vector<std::pair<std::size_t, GroupElement>> find_addable_centers(const Quasitiling& tiling,
                                                                              const Rational& eps) {
  const Window& W = tiling.window();
  const std::vector<Tile> tiles = tiling.tiles();
  std::vector<std::pair<std::size_t, GroupElement>> found;
  std::vector<char> marked(W.size(), 0);
  for (std::size_t j = tiling.levels(); j-- > 0;) {
    for (const auto& t : tiles)
      if (t.level == j)
        for (auto c : t.cells) marked[static_cast<std::size_t>(c)] = 1;
    const FiniteSubset& T = tiling.shape(j);
    const std::int64_t limit = detail::overlap_limit(T.ssize(), eps);
    for (const auto& g : interior(W, T))
      if (detail::count_marked(W, T, g, marked, limit) < limit) found.emplace_back(j, g);
  }
  return found;
}

/// Fraction of interior(W, T_k) covered by the union of tiles.
inline Rational covering_fraction(const Quasitiling& tiling) {
  if (tiling.levels() == 0) throw DomainError("tiling has no shapes");
  const Window& W = tiling.window();
  const FiniteSubset inner = interior(W, tiling.shapes().back());
  if (inner.empty()) throw DomainError("interior of the largest shape is empty");
  const std::vector<char> cov = tiling.coverage();
  std::int64_t hit = 0;
  for (const auto& g : inner) hit += cov[static_cast<std::size_t>(W.index_of(g))];
  return Rational(hit, inner.ssize());
}

/// 1 - (1 - ε/2)^k.
inline Rational covering_bound(const Rational& eps, std::size_t k) {
  Rational p(1);
  const Rational q = Rational(1) - eps / Rational(2);
  for (std::size_t i = 0; i < k; ++i) p = p * q;
  return Rational(1) - p;
}

/// Greedy maximal ε-disjoint quasitiling of W by nested shapes. Levels are processed from
/// the largest shape down; at each level the candidates g ∈ interior(W,T_j) are scanned in
/// canonical order and g is added iff |H ∩ T_j g| < ε|T_j| for the current union H.
inline Quasitiling greedy_construct(std::shared_ptr<const Window> window, std::vector<FiniteSubset> shapes,
                                    const Rational& eps) {
  if (!window) throw DomainError("window is required");
  const Window& W = *window;
  if (eps <= Rational(0) || eps >= Rational(1, 2)) throw DomainError("eps must lie in (0, 1/2)");
  detail::require_nested_shapes(shapes, W.group());
  if (interior(W, shapes.back()).empty()) throw DomainError("interior(W, T_k) is empty: window smaller than the largest shape");

  std::vector<char> marked(W.size(), 0);
  std::vector<FiniteSubset> centers(shapes.size(), FiniteSubset(W.group()));
  for (std::size_t j = shapes.size(); j-- > 0;) {
    const FiniteSubset& T = shapes[j];
    const std::int64_t limit = detail::overlap_limit(T.ssize(), eps);
    std::vector<GroupElement> chosen;
    for (const auto& g : interior(W, T)) {
      if (detail::count_marked(W, T, g, marked, limit) >= limit) continue;
      chosen.push_back(g);
      for (const auto& t : T) marked[static_cast<std::size_t>(W.index_of(multiply(W.group(), t, g)))] = 1;
    }
    centers[j] = FiniteSubset(W.group(), std::move(chosen));
  }

  Quasitiling out(std::move(shapes), std::move(centers), std::move(window));
  out.meta().eps = eps;
  out.meta().covering = covering_fraction(out);
  out.meta().maximal = find_addable_centers(out, eps).empty();
  return out;
}

// ---------------------------------------------------------------------------
// Disjointification by element numbering
// ---------------------------------------------------------------------------

struct DisjointifyResult {
  Quasitiling tiling;  // exactly disjoint; shapes are the distinct retained shapes
  DisjointnessCertificate certificate;
};

/// Number the elements of the union of shapes with e first, then the rest in descending
/// canonical order. An element x of tile T_i c carries the number of x·c⁻¹; every
/// element stays in the tile where its number is smallest, ties going to the lower
/// (level, center). Each center keeps itself since e has the smallest number.
inline DisjointifyResult disjointify(const Quasitiling& tiling) {
  const Window& W = tiling.window();
  const GroupSpec& G = W.group();
  const std::vector<Tile> tiles = tiling.tiles();
  if (tiling.levels() == 0) return {tiling, detail::certificate_from_owner(tiles, W, std::vector<std::int64_t>(W.size(), -1))};

  {
    std::map<GroupElement, std::size_t> level_of_center;
    for (const auto& t : tiles) {
      auto [it, inserted] = level_of_center.emplace(t.center, t.level);
      if (!inserted)
        throw DomainError("center used by two tiles (levels " + std::to_string(it->second) + " and " +
                          std::to_string(t.level) + ")");
    }
  }

  FiniteSubset all_shapes = tiling.shape(0);
  for (std::size_t i = 1; i < tiling.levels(); ++i) all_shapes = set_union(all_shapes, tiling.shape(i));
  const std::int64_t n_all = all_shapes.ssize();
  auto number_of = [&](const GroupElement& s) -> std::int64_t {
    if (is_identity(s)) return 0;
    const std::int64_t pos = all_shapes.index_of(s);
    return n_all - pos;  // descending canonical order; e sits below every other number
  };

  // Per-level numbers aligned with the shape's element order.
  std::vector<std::vector<std::int64_t>> numbers(tiling.levels());
  for (std::size_t i = 0; i < tiling.levels(); ++i)
    for (const auto& s : tiling.shape(i)) numbers[i].push_back(number_of(s));

  std::vector<std::int64_t> owner(W.size(), -1);
  std::vector<std::int64_t> best(W.size(), INT64_MAX);
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Tile& tile = tiles[t];
    const FiniteSubset& T = tiling.shape(tile.level);
    for (std::size_t k = 0; k < T.size(); ++k) {
      const auto cell = static_cast<std::size_t>(W.index_of(multiply(G, T[k], tile.center)));
      // Tiles come in (level, center) order, so strict < keeps the earlier tile on ties.
      if (numbers[tile.level][k] < best[cell]) {
        best[cell] = numbers[tile.level][k];
        owner[cell] = static_cast<std::int64_t>(t);
      }
    }
  }

  // Group tiles by retained shape E_c = {x c⁻¹ : x retained by tile (i,c)}.
  std::vector<std::vector<GroupElement>> retained(tiles.size());
  for (std::size_t cell = 0; cell < owner.size(); ++cell)
    if (owner[cell] >= 0) retained[static_cast<std::size_t>(owner[cell])].push_back(W.at(cell));
  std::vector<FiniteSubset> new_shapes;
  std::vector<std::vector<GroupElement>> new_centers;
  std::map<std::vector<GroupElement>, std::size_t> shape_index;
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const GroupElement c_inv = inverse(G, tiles[t].center);
    std::vector<GroupElement> rel;
    rel.reserve(retained[t].size());
    for (const auto& x : retained[t]) rel.push_back(multiply(G, x, c_inv));
    FiniteSubset shape(G, std::move(rel));
    auto [it, inserted] = shape_index.emplace(shape.elements(), new_shapes.size());
    if (inserted) {
      new_shapes.push_back(std::move(shape));
      new_centers.emplace_back();
    }
    new_centers[it->second].push_back(tiles[t].center);
  }
  std::vector<FiniteSubset> center_sets;
  for (auto& cs : new_centers) center_sets.emplace_back(G, std::move(cs));

  QuasitilingMeta meta;
  meta.eps = tiling.meta().eps;
  return {Quasitiling(std::move(new_shapes), std::move(center_sets), tiling.window_ptr(), meta),
          detail::certificate_from_owner(tiles, W, owner)};
}

// ---------------------------------------------------------------------------
// Absorption of lower-level tiles
// ---------------------------------------------------------------------------

struct AbsorbResult {
  FiniteSubset set;                 // S ⊇ S~
  std::int64_t absorbed_tiles = 0;
  bool no_boundary_tiles = false;   // every tile meeting S lies inside S
  bool within_spread = false;       // S ⊆ E·S~, E = T_1T_1⁻¹ ⋯ T_{k-1}T_{k-1}⁻¹
  std::int64_t spread_size = 0;     // |E|
};

namespace detail {

inline std::string describe_tile(const Tile& t) {
  std::string s = "(level " + std::to_string(t.level) + ", center [";
  for (std::size_t i = 0; i < t.center.size(); ++i) s += (i ? "," : "") + std::to_string(t.center[i]);
  return s + "])";
}

}  // namespace detail

/// Enlarges S~ by absorbing, from the top level of `lower` down to level 0, every tile
/// that meets the current set. Preconditions (checked, DomainError naming the tiles):
/// tiles within a level are pairwise disjoint, and a tile meets at most one tile of any
/// higher level.
inline AbsorbResult absorb_lower_tiles(const FiniteSubset& S_tilde, const Quasitiling& lower) {
  const Window& W = lower.window();
  W.region().same_group(S_tilde);
  const GroupSpec& G = W.group();
  const std::vector<Tile> tiles = lower.tiles();
  const std::size_t k = lower.levels();

  // owner[l][cell] = tile index of level l covering cell.
  std::vector<std::vector<std::int64_t>> owner(k, std::vector<std::int64_t>(W.size(), -1));
  for (std::size_t t = 0; t < tiles.size(); ++t)
    for (auto c : tiles[t].cells) {
      auto& o = owner[tiles[t].level][static_cast<std::size_t>(c)];
      if (o >= 0)
        throw DomainError("tiles " + detail::describe_tile(tiles[static_cast<std::size_t>(o)]) + " and " +
                          detail::describe_tile(tiles[t]) + " of the same level overlap");
      o = static_cast<std::int64_t>(t);
    }
  for (const auto& a : tiles)
    for (std::size_t up = a.level + 1; up < k; ++up) {
      std::int64_t met = -1;
      for (auto c : a.cells) {
        std::int64_t o = owner[up][static_cast<std::size_t>(c)];
        if (o >= 0 && met >= 0 && o != met)
          throw DomainError("tile " + detail::describe_tile(a) + " meets two higher tiles " +
                            detail::describe_tile(tiles[static_cast<std::size_t>(met)]) + " and " +
                            detail::describe_tile(tiles[static_cast<std::size_t>(o)]));
        if (o >= 0) met = o;
      }
    }

  std::vector<char> in_s = W.mark(S_tilde);
  std::vector<char> absorbed(tiles.size(), 0);
  AbsorbResult r{FiniteSubset(G)};
  for (std::size_t l = k; l-- > 0;) {
    std::vector<std::size_t> take;
    for (std::size_t t = 0; t < tiles.size(); ++t) {
      if (tiles[t].level != l) continue;
      if (std::any_of(tiles[t].cells.begin(), tiles[t].cells.end(),
                      [&](std::int64_t c) { return in_s[static_cast<std::size_t>(c)] != 0; }))
        take.push_back(t);
    }
    for (std::size_t t : take) {
      absorbed[t] = 1;
      ++r.absorbed_tiles;
      for (auto c : tiles[t].cells) in_s[static_cast<std::size_t>(c)] = 1;
    }
  }

  // No tile may be left on the boundary of the result.
  for (const auto& b : tiles) {
    const bool meets = std::any_of(b.cells.begin(), b.cells.end(), [&](std::int64_t c) { return in_s[static_cast<std::size_t>(c)] != 0; });
    const bool inside = std::all_of(b.cells.begin(), b.cells.end(), [&](std::int64_t c) { return in_s[static_cast<std::size_t>(c)] != 0; });
    if (!meets || inside) continue;
    for (std::size_t a = 0; a < tiles.size(); ++a)
      if (absorbed[a] && tiles[a].level < b.level &&
          std::any_of(tiles[a].cells.begin(), tiles[a].cells.end(), [&](std::int64_t c) {
            return std::binary_search(b.cells.begin(), b.cells.end(), c);
          }))
        throw DomainError("absorbed tile " + detail::describe_tile(tiles[a]) + " leaves tile " +
                          detail::describe_tile(b) + " on the boundary");
    throw DomainError("tile " + detail::describe_tile(b) + " is left on the boundary of the absorbed set");
  }
  r.no_boundary_tiles = true;

  std::vector<GroupElement> elems;
  for (const auto& s : S_tilde)
    if (!W.contains(s)) elems.push_back(s);
  for (std::size_t c = 0; c < in_s.size(); ++c)
    if (in_s[c]) elems.push_back(W.at(c));
  r.set = FiniteSubset(G, std::move(elems));

  FiniteSubset spread = FiniteSubset::singleton(G, identity(G));
  for (std::size_t l = 0; l < k; ++l)
    spread = set_product(spread, set_product(lower.shape(l), set_inverse(lower.shape(l))));
  r.spread_size = spread.ssize();
  r.within_spread = r.set.is_subset_of(set_product(spread, S_tilde));
  return r;
}

// ---------------------------------------------------------------------------
// Marker packing
// ---------------------------------------------------------------------------

struct MarkerResult {
  FiniteSubset markers;   // V
  FiniteSubset covering;  // F⁻¹F
};

/// Greedy maximal V ⊆ interior(W,F) with the translates Fv pairwise disjoint.
inline MarkerResult maximal_marker_set(const Window& W, const FiniteSubset& F) {
  W.region().same_group(F);
  const FiniteSubset inner = interior(W, F);
  if (inner.empty()) throw DomainError("interior(W, F) is empty");
  std::vector<char> used(W.size(), 0);
  std::vector<GroupElement> chosen;
  std::vector<std::size_t> cells(F.size());
  for (const auto& v : inner) {
    bool free = true;
    for (std::size_t k = 0; k < F.size(); ++k) {
      cells[k] = static_cast<std::size_t>(W.index_of(multiply(W.group(), F[k], v)));
      if (used[cells[k]]) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    chosen.push_back(v);
    for (auto c : cells) used[c] = 1;
  }
  return {FiniteSubset(W.group(), std::move(chosen)), set_product(set_inverse(F), F)};
}

struct MarkerCheck {
  bool disjoint = false;
  bool covers_interior = false;
};

/// Exhaustive check of both marker properties.
inline MarkerCheck check_marker_set(const Window& W, const FiniteSubset& F, const MarkerResult& m) {
  MarkerCheck out;
  std::vector<char> used(W.size(), 0);
  out.disjoint = true;
  for (const auto& v : m.markers)
    for (const auto& f : F) {
      std::int64_t c = W.index_of(multiply(W.group(), f, v));
      if (c < 0 || used[static_cast<std::size_t>(c)]) out.disjoint = false;
      if (c >= 0) used[static_cast<std::size_t>(c)] = 1;
    }
  const FiniteSubset reach = set_product(m.covering, m.markers);
  const FiniteSubset inner = interior(W, F);
  out.covers_interior = std::all_of(inner.begin(), inner.end(), [&](const GroupElement& g) { return reach.contains(g); });
  return out;
}

}  // namespace quasitile
