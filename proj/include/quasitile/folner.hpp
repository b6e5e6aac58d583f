#pragma once

#include <cstdint>
#include <optional>

#include "quasitile/finite_subset.hpp"
#include "quasitile/rational.hpp"

namespace quasitile {

/// The standard Følner sequence of a supported group:
///   Z^d:         F_n = [0,n)^d
///   Heisenberg:  F_n = {(a,b,c) : 0 ≤ a,b < n, 0 ≤ c < n²}
/// Both contain e and are nested in n.
class FolnerFamily {
 public:
  explicit FolnerFamily(GroupSpec G) : group_(G) {}

  const GroupSpec& group() const noexcept { return group_; }

  FiniteSubset set(std::int64_t n) const {
    if (n < 1) throw DomainError("Følner index must be >= 1");
    if (group_.kind() == GroupSpec::Kind::Heisenberg3) {
      const std::int64_t n2 = detail::checked_mul(n, n);
      const std::int64_t lo[3] = {0, 0, 0};
      const std::int64_t hi[3] = {n, n, n2};
      return FiniteSubset::box(group_, lo, hi);
    }
    return FiniteSubset::cube(group_, n);
  }

  /// Predicted |F_n| (n^d or n⁴), overflow-checked.
  std::int64_t size(std::int64_t n) const {
    std::int64_t s = 1;
    const std::size_t p = group_.kind() == GroupSpec::Kind::Heisenberg3 ? 4 : group_.rank();
    for (std::size_t i = 0; i < p; ++i) s = detail::checked_mul(s, n);
    return s;
  }

 private:
  GroupSpec group_;
};

inline FiniteSubset folner_set(const FolnerFamily& family, std::int64_t n) { return family.set(n); }

/// |F Δ EF| / |F|, exact.
///
/// Computed without materializing EF: |EF \ F| by collecting the products that leave F,
/// |F \ EF| by testing each f for a preimage g⁻¹f ∈ F.
inline Rational invariance_defect(const FiniteSubset& F, const FiniteSubset& E) {
  F.same_group(E);
  if (F.empty()) throw DomainError("invariance defect of an empty set is undefined");
  const GroupSpec& G = F.group();
  std::vector<GroupElement> outside;
  for (const auto& g : E)
    for (const auto& f : F) {
      GroupElement p = multiply(G, g, f);
      if (!F.contains(p)) outside.push_back(p);
    }
  const std::int64_t gained = FiniteSubset(G, std::move(outside)).ssize();

  std::vector<GroupElement> e_inv;
  e_inv.reserve(E.size());
  for (const auto& g : E) e_inv.push_back(inverse(G, g));
  std::int64_t lost = 0;
  for (const auto& f : F) {
    bool reached = false;
    for (const auto& gi : e_inv)
      if (F.contains(multiply(G, gi, f))) {
        reached = true;
        break;
      }
    if (!reached) ++lost;
  }
  return Rational(gained + lost, F.ssize());
}

/// The "simpler condition" |EF| ≤ (1+δ)|F|; equivalent to defect ≤ δ when e ∈ E.
inline bool satisfies_product_bound(const FiniteSubset& F, const FiniteSubset& E, const Rational& delta) {
  const std::int64_t ef = set_product(E, F).ssize();
  return Rational(ef) <= (Rational(1) + delta) * Rational(F.ssize());
}

/// Least n ≤ n_max with defect(F_n, E) ≤ δ. An empty result means n_max was too small.
inline std::optional<std::int64_t> find_invariant_index(const FolnerFamily& family, const FiniteSubset& E,
                                                        const Rational& delta, std::int64_t n_max) {
  if (delta <= Rational(0)) throw DomainError("delta must be positive");
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (invariance_defect(family.set(n), E) <= delta) return n;
  return std::nullopt;
}

}  // namespace quasitile
