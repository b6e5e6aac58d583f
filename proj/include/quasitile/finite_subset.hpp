#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "quasitile/group.hpp"

namespace quasitile {

/// A finite set of group elements, stored sorted in canonical order without duplicates.
///
/// Membership is O(1) when the set happens to be a full coordinate box (the common
/// case for Følner sets and windows), otherwise a binary search.
class FiniteSubset {
 public:
  using const_iterator = std::vector<GroupElement>::const_iterator;

  explicit FiniteSubset(GroupSpec G) : group_(G) { refresh_box(); }

  FiniteSubset(GroupSpec G, std::vector<GroupElement> elems) : group_(G), elems_(std::move(elems)) {
    for (const auto& g : elems_) check_member(group_, g);
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    refresh_box();
  }

  FiniteSubset(GroupSpec G, std::initializer_list<GroupElement> elems)
      : FiniteSubset(G, std::vector<GroupElement>(elems)) {}

  /// Boxes are materialized element by element, so their size is capped.
  static constexpr std::int64_t kMaxBoxSize = std::int64_t{1} << 24;

  /// The coordinate box ∏[lo_i, hi_i) (half-open).
  static FiniteSubset box(GroupSpec G, std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
    if (lo.size() != G.rank() || hi.size() != G.rank()) throw DomainError("box bounds do not match group rank");
    __int128 count = 1;
    for (std::size_t i = 0; i < G.rank(); ++i) {
      if (hi[i] < lo[i]) throw DomainError("box with hi < lo");
      count *= static_cast<__int128>(hi[i]) - lo[i];
      if (count > kMaxBoxSize) throw CapacityError("box-size", "box has more than 2^24 elements");
    }
    FiniteSubset s(G);
    if (count == 0) return s;
    s.elems_.reserve(static_cast<std::size_t>(count));
    GroupElement g = GroupElement::zero(G.rank());
    for (std::size_t i = 0; i < G.rank(); ++i) g[i] = lo[i];
    // Odometer with the last coordinate fastest gives canonical order directly.
    while (true) {
      s.elems_.push_back(g);
      std::size_t i = G.rank();
      while (i > 0) {
        --i;
        if (++g[i] < hi[i]) break;
        g[i] = lo[i];
        if (i == 0) {
          s.refresh_box();
          return s;
        }
      }
    }
  }
  static FiniteSubset box(GroupSpec G, std::initializer_list<std::int64_t> lo, std::initializer_list<std::int64_t> hi) {
    return box(G, std::span<const std::int64_t>(lo.begin(), lo.size()),
               std::span<const std::int64_t>(hi.begin(), hi.size()));
  }
  /// [0, n)^rank.
  static FiniteSubset cube(GroupSpec G, std::int64_t n) {
    std::vector<std::int64_t> lo(G.rank(), 0), hi(G.rank(), n);
    return box(G, lo, hi);
  }

  static FiniteSubset singleton(GroupSpec G, const GroupElement& g) { return FiniteSubset(G, {g}); }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return elems_.size(); }
  std::int64_t ssize() const noexcept { return static_cast<std::int64_t>(elems_.size()); }
  bool empty() const noexcept { return elems_.empty(); }
  const_iterator begin() const noexcept { return elems_.begin(); }
  const_iterator end() const noexcept { return elems_.end(); }
  const GroupElement& operator[](std::size_t i) const noexcept { return elems_[i]; }
  const std::vector<GroupElement>& elements() const noexcept { return elems_; }

  /// True when the set equals the full box spanned by its coordinate ranges.
  bool is_box() const noexcept { return is_box_; }
  std::span<const std::int64_t> box_lo() const noexcept { return {lo_.data(), group_.rank()}; }
  std::span<const std::int64_t> box_hi() const noexcept { return {hi_.data(), group_.rank()}; }

  bool contains(const GroupElement& g) const noexcept {
    if (elems_.empty() || g.size() != group_.rank()) return false;
    if (is_box_) {
      for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] < lo_[i] || g[i] >= hi_[i]) return false;
      return true;
    }
    return std::binary_search(elems_.begin(), elems_.end(), g);
  }

  /// Position of g in canonical order, or -1.
  std::int64_t index_of(const GroupElement& g) const noexcept {
    if (elems_.empty() || g.size() != group_.rank()) return -1;
    if (is_box_) {
      std::int64_t idx = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < lo_[i] || g[i] >= hi_[i]) return -1;
        idx = idx * (hi_[i] - lo_[i]) + (g[i] - lo_[i]);
      }
      return idx;
    }
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
    if (it == elems_.end() || *it != g) return -1;
    return it - elems_.begin();
  }

  bool is_subset_of(const FiniteSubset& other) const {
    same_group(other);
    if (size() > other.size()) return false;
    return std::all_of(begin(), end(), [&](const GroupElement& g) { return other.contains(g); });
  }

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) {
    return a.group_ == b.group_ && a.elems_ == b.elems_;
  }

  void same_group(const FiniteSubset& other) const {
    if (!(group_ == other.group_))
      throw DomainError("subsets belong to different groups (" + group_.name() + " vs " + other.group_.name() + ")");
  }

 private:
  void refresh_box() {
    is_box_ = false;
    if (elems_.empty()) return;
    const std::size_t r = group_.rank();
    for (std::size_t i = 0; i < r; ++i) {
      lo_[i] = elems_.front()[i];
      hi_[i] = elems_.front()[i];
    }
    for (const auto& g : elems_)
      for (std::size_t i = 0; i < r; ++i) {
        lo_[i] = std::min(lo_[i], g[i]);
        hi_[i] = std::max(hi_[i], g[i]);
      }
    __int128 volume = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (hi_[i] == INT64_MAX) return;  // cannot represent the half-open bound
      hi_[i] += 1;
      volume *= static_cast<__int128>(hi_[i]) - lo_[i];
      if (volume > static_cast<__int128>(elems_.size())) return;
    }
    is_box_ = volume == static_cast<__int128>(elems_.size());
  }

  GroupSpec group_;
  std::vector<GroupElement> elems_;
  std::array<std::int64_t, kMaxRank> lo_{};
  std::array<std::int64_t, kMaxRank> hi_{};
  bool is_box_ = false;
};

inline FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
  a.same_group(b);
  std::vector<GroupElement> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSubset(a.group(), std::move(out));
}

inline FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
  a.same_group(b);
  std::vector<GroupElement> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSubset(a.group(), std::move(out));
}

inline FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
  a.same_group(b);
  std::vector<GroupElement> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSubset(a.group(), std::move(out));
}

inline std::int64_t intersection_size(const FiniteSubset& a, const FiniteSubset& b) {
  a.same_group(b);
  const FiniteSubset& small = a.size() <= b.size() ? a : b;
  const FiniteSubset& large = a.size() <= b.size() ? b : a;
  std::int64_t n = 0;
  for (const auto& g : small) n += large.contains(g) ? 1 : 0;
  return n;
}

/// EF = {g·f : g ∈ E, f ∈ F}.
inline FiniteSubset set_product(const FiniteSubset& E, const FiniteSubset& F) {
  E.same_group(F);
  std::vector<GroupElement> out;
  out.reserve(E.size() * F.size());
  for (const auto& g : E)
    for (const auto& f : F) out.push_back(multiply(E.group(), g, f));
  return FiniteSubset(E.group(), std::move(out));
}

/// E⁻¹ = {g⁻¹ : g ∈ E}.
inline FiniteSubset set_inverse(const FiniteSubset& E) {
  std::vector<GroupElement> out;
  out.reserve(E.size());
  for (const auto& g : E) out.push_back(inverse(E.group(), g));
  return FiniteSubset(E.group(), std::move(out));
}

enum class Side { Left, Right };

/// gF (left) or Fg (right).
inline FiniteSubset translate(const FiniteSubset& F, const GroupElement& g, Side side) {
  check_member(F.group(), g);
  std::vector<GroupElement> out;
  out.reserve(F.size());
  for (const auto& f : F) out.push_back(side == Side::Left ? multiply(F.group(), g, f) : multiply(F.group(), f, g));
  return FiniteSubset(F.group(), std::move(out));
}

}  // namespace quasitile
