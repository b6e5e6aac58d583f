#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>

#include "quasitile/checked.hpp"
#include "quasitile/error.hpp"

namespace quasitile {

inline constexpr std::size_t kMaxRank = 8;

/// The supported groups: the free abelian group Z^d and the integer Heisenberg group.
class GroupSpec {
 public:
  enum class Kind : std::uint8_t { Zd, Heisenberg3 };

  static GroupSpec zd(int d) {
    if (d < 1) throw DomainError("Zd requires d >= 1");
    if (static_cast<std::size_t>(d) > kMaxRank)
      throw DomainError("Zd rank " + std::to_string(d) + " exceeds the supported maximum " +
                        std::to_string(kMaxRank));
    return GroupSpec(Kind::Zd, d);
  }
  static GroupSpec heisenberg() { return GroupSpec(Kind::Heisenberg3, 3); }

  /// "z1", "z2", ..., "h3" (also accepts "heisenberg").
  static GroupSpec parse(const std::string& name) {
    if (name == "h3" || name == "heisenberg" || name == "heisenberg3") return heisenberg();
    if (name.size() >= 2 && (name[0] == 'z' || name[0] == 'Z')) {
      std::string digits = name.substr(1);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 4)
        return zd(std::stoi(digits));
    }
    throw DomainError("unknown group '" + name + "' (expected z<d> or h3)");
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(rank_); }
  bool abelian() const noexcept { return kind_ == Kind::Zd; }
  std::string name() const {
    return kind_ == Kind::Heisenberg3 ? std::string("h3") : "z" + std::to_string(rank_);
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(Kind k, int r) : kind_(k), rank_(r) {}
  Kind kind_ = Kind::Zd;
  int rank_ = 1;
};

/// A group element in canonical coordinates. Elements do not carry their group;
/// operations take the GroupSpec and check the coordinate count against it.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::span<const std::int64_t> coords) {
    if (coords.size() > kMaxRank) throw DomainError("too many coordinates");
    size_ = static_cast<std::uint8_t>(coords.size());
    std::copy(coords.begin(), coords.end(), c_.begin());
  }
  GroupElement(std::initializer_list<std::int64_t> coords)
      : GroupElement(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

  static GroupElement zero(std::size_t rank) {
    GroupElement g;
    g.size_ = static_cast<std::uint8_t>(rank);
    return g;
  }

  std::size_t size() const noexcept { return size_; }
  std::int64_t operator[](std::size_t i) const noexcept { return c_[i]; }
  std::int64_t& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const std::int64_t> coords() const noexcept { return {c_.data(), size_}; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.c_.begin(), a.c_.begin() + a.size_, b.c_.begin());
  }
  /// Canonical total order: lexicographic on coordinates.
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) noexcept {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
    os << '[';
    for (std::size_t i = 0; i < g.size_; ++i) os << (i ? "," : "") << g.c_[i];
    return os << ']';
  }

 private:
  std::array<std::int64_t, kMaxRank> c_{};
  std::uint8_t size_ = 0;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ g.size();
    for (std::int64_t v : g.coords()) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

inline void check_member(const GroupSpec& G, const GroupElement& g) {
  if (g.size() != G.rank())
    throw DomainError("element with " + std::to_string(g.size()) + " coordinates does not belong to " +
                      G.name());
}

inline GroupElement identity(const GroupSpec& G) { return GroupElement::zero(G.rank()); }

inline bool is_identity(const GroupElement& g) noexcept {
  for (std::int64_t v : g.coords())
    if (v != 0) return false;
  return true;
}

/// g·h. Heisenberg: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b'), the upper unitriangular
/// matrix product.
inline GroupElement multiply(const GroupSpec& G, const GroupElement& g, const GroupElement& h) {
  check_member(G, g);
  check_member(G, h);
  GroupElement r = GroupElement::zero(G.rank());
  for (std::size_t i = 0; i < G.rank(); ++i) r[i] = detail::checked_add(g[i], h[i]);
  if (G.kind() == GroupSpec::Kind::Heisenberg3) r[2] = detail::checked_add(r[2], detail::checked_mul(g[0], h[1]));
  return r;
}

/// g⁻¹. Heisenberg: (a,b,c)⁻¹ = (-a, -b, a·b - c).
inline GroupElement inverse(const GroupSpec& G, const GroupElement& g) {
  check_member(G, g);
  GroupElement r = GroupElement::zero(G.rank());
  if (G.kind() == GroupSpec::Kind::Zd) {
    for (std::size_t i = 0; i < G.rank(); ++i) r[i] = detail::checked_neg(g[i]);
  } else {
    r[0] = detail::checked_neg(g[0]);
    r[1] = detail::checked_neg(g[1]);
    r[2] = detail::checked_sub(detail::checked_mul(g[0], g[1]), g[2]);
  }
  return r;
}

enum class GroupOp { Mul, Inv, Identity };

/// Single entry point matching the CLI `group op` surface. For Inv and Identity `h` is ignored.
inline GroupElement group_op(const GroupSpec& G, const GroupElement& g, const GroupElement& h, GroupOp op) {
  switch (op) {
    case GroupOp::Mul: return multiply(G, g, h);
    case GroupOp::Inv: return inverse(G, g);
    case GroupOp::Identity: return identity(G);
  }
  return identity(G);
}

}  // namespace quasitile
