#pragma once

#include <cstdint>
#include <vector>

#include "quasitile/finite_subset.hpp"

namespace quasitile {

/// The finite portion of G under study. Every windowed quantity quantifies only over
/// translates that lie fully inside the region.
class Window {
 public:
  explicit Window(FiniteSubset region) : region_(std::move(region)) {
    if (region_.empty()) throw DomainError("window must be nonempty");
  }

  static Window box(GroupSpec G, std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
    return Window(FiniteSubset::box(G, lo, hi));
  }
  static Window cube(GroupSpec G, std::int64_t n) { return Window(FiniteSubset::cube(G, n)); }

  const FiniteSubset& region() const noexcept { return region_; }
  const GroupSpec& group() const noexcept { return region_.group(); }
  std::size_t size() const noexcept { return region_.size(); }
  const GroupElement& at(std::size_t i) const noexcept { return region_[i]; }
  std::int64_t index_of(const GroupElement& g) const noexcept { return region_.index_of(g); }
  bool contains(const GroupElement& g) const noexcept { return region_.contains(g); }

  /// Window positions of the right translate Fg, or an empty vector when Fg ⊄ W.
  std::vector<std::int64_t> translate_indices(const FiniteSubset& F, const GroupElement& g) const {
    std::vector<std::int64_t> idx;
    idx.reserve(F.size());
    for (const auto& f : F) {
      std::int64_t i = index_of(multiply(group(), f, g));
      if (i < 0) return {};
      idx.push_back(i);
    }
    return idx;
  }

  /// Marks H ∩ W as a bitmap over window positions.
  std::vector<char> mark(const FiniteSubset& H) const {
    region_.same_group(H);
    std::vector<char> bits(size(), 0);
    for (const auto& h : H) {
      std::int64_t i = index_of(h);
      if (i >= 0) bits[static_cast<std::size_t>(i)] = 1;
    }
    return bits;
  }

 private:
  FiniteSubset region_;
};

/// interior(W, F) = {g : Fg ⊆ W}, in canonical order.
inline FiniteSubset interior(const Window& W, const FiniteSubset& F) {
  W.region().same_group(F);
  if (F.empty()) throw DomainError("interior of an empty shape is undefined");
  const GroupSpec& G = W.group();
  if (G.abelian() && F.is_box() && W.region().is_box()) {
    // Box by box in Z^d: g ranges over [W.lo - F.lo, W.hi - F.hi] coordinatewise.
    std::vector<std::int64_t> lo(G.rank()), hi(G.rank());
    for (std::size_t i = 0; i < G.rank(); ++i) {
      lo[i] = detail::checked_sub(W.region().box_lo()[i], F.box_lo()[i]);
      hi[i] = detail::checked_add(detail::checked_sub(W.region().box_hi()[i], F.box_hi()[i]), 1);
      if (hi[i] <= lo[i]) return FiniteSubset(G);
    }
    return FiniteSubset::box(G, lo, hi);
  }
  // Fg ⊆ W forces f0·g ∈ W, so g ranges over f0⁻¹W.
  const GroupElement f0_inv = inverse(G, F[0]);
  std::vector<GroupElement> out;
  for (const auto& w : W.region()) {
    GroupElement g = multiply(G, f0_inv, w);
    bool inside = true;
    for (std::size_t k = 1; k < F.size() && inside; ++k) inside = W.contains(multiply(G, F[k], g));
    if (inside) out.push_back(g);
  }
  return FiniteSubset(G, std::move(out));
}

}  // namespace quasitile
