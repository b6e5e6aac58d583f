#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quasitile/rational.hpp"
#include "quasitile/window.hpp"

namespace quasitile {

/// Construction metadata. The dynamical / continuous / codeable attributes of a
/// quasitiling have no operational meaning on a single finite window and are not modelled.
struct QuasitilingMeta {
  std::optional<Rational> eps;
  std::optional<Rational> covering;  // fraction of interior(W, T_k) covered by tiles
  std::optional<bool> maximal;
};

/// One tile T_level · center, resolved to window positions.
struct Tile {
  std::size_t level = 0;
  GroupElement center;
  std::vector<std::int64_t> cells;  // sorted window positions
};

/// Shapes T_0..T_{k-1} with center sets C_0..C_{k-1} on a finite window. Tiles are the
/// right translates T_i·c, and each one must lie inside the window. Levels are 0-based here
/// and in the JSON format; level i corresponds to T_{i+1} in the usual 1-based notation.
class Quasitiling {
 public:
  Quasitiling(std::vector<FiniteSubset> shapes, std::vector<FiniteSubset> centers, std::shared_ptr<const Window> window,
              QuasitilingMeta meta = {})
      : shapes_(std::move(shapes)), centers_(std::move(centers)), window_(std::move(window)), meta_(std::move(meta)) {
    if (!window_) throw DomainError("quasitiling needs a window");
    if (shapes_.size() != centers_.size()) throw DomainError("shapes and center lists differ in length");
    const GroupSpec& G = window_->group();
    const GroupElement e = identity(G);
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      window_->region().same_group(shapes_[i]);
      window_->region().same_group(centers_[i]);
      if (!shapes_[i].contains(e)) throw DomainError("shape " + std::to_string(i) + " does not contain the identity");
      for (const auto& c : centers_[i])
        if (window_->translate_indices(shapes_[i], c).empty())
          throw DomainError("tile of level " + std::to_string(i) + " at center " + to_string(c) +
                            " leaves the window");
    }
  }

  std::size_t levels() const noexcept { return shapes_.size(); }
  const std::vector<FiniteSubset>& shapes() const noexcept { return shapes_; }
  const std::vector<FiniteSubset>& centers() const noexcept { return centers_; }
  const FiniteSubset& shape(std::size_t i) const { return shapes_.at(i); }
  const FiniteSubset& center_set(std::size_t i) const { return centers_.at(i); }
  const Window& window() const noexcept { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const noexcept { return window_; }
  const GroupSpec& group() const noexcept { return window_->group(); }
  const QuasitilingMeta& meta() const noexcept { return meta_; }
  QuasitilingMeta& meta() noexcept { return meta_; }

  std::size_t tile_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : centers_) n += c.size();
    return n;
  }

  /// T_0 ⊆ T_1 ⊆ ... ⊆ T_{k-1}.
  bool nested() const {
    for (std::size_t i = 1; i < shapes_.size(); ++i)
      if (!shapes_[i - 1].is_subset_of(shapes_[i])) return false;
    return true;
  }

  /// All tiles, ordered by level then canonical center order.
  std::vector<Tile> tiles() const {
    std::vector<Tile> out;
    out.reserve(tile_count());
    for (std::size_t i = 0; i < shapes_.size(); ++i)
      for (const auto& c : centers_[i]) {
        Tile t{i, c, window_->translate_indices(shapes_[i], c)};
        std::sort(t.cells.begin(), t.cells.end());
        out.push_back(std::move(t));
      }
    return out;
  }

  /// Union of all tiles as a bitmap over window positions.
  std::vector<char> coverage() const {
    std::vector<char> bits(window_->size(), 0);
    for (const auto& t : tiles())
      for (auto i : t.cells) bits[static_cast<std::size_t>(i)] = 1;
    return bits;
  }

  /// Union of all tiles as a set.
  FiniteSubset union_set() const {
    std::vector<GroupElement> out;
    auto bits = coverage();
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) out.push_back(window_->at(i));
    return FiniteSubset(group(), std::move(out));
  }

 private:
  static std::string to_string(const GroupElement& g) {
    std::string s = "[";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + "]";
  }

  std::vector<FiniteSubset> shapes_;
  std::vector<FiniteSubset> centers_;
  std::shared_ptr<const Window> window_;
  QuasitilingMeta meta_;
};

/// Exact pairwise disjointness of a list of tiles (each cells vector sorted).
inline bool tiles_pairwise_disjoint(const std::vector<Tile>& tiles, std::size_t window_size) {
  std::vector<char> seen(window_size, 0);
  for (const auto& t : tiles)
    for (auto i : t.cells) {
      if (seen[static_cast<std::size_t>(i)]) return false;
      seen[static_cast<std::size_t>(i)] = 1;
    }
  return true;
}

}  // namespace quasitile
