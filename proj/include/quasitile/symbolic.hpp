#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "quasitile/quasitiling.hpp"

namespace quasitile {

inline constexpr std::int64_t kMaxAlphabet = 256;

struct Alphabet {
  std::int64_t size = 1;

  explicit Alphabet(std::int64_t n) : size(n) {
    if (n < 1 || n > kMaxAlphabet) throw DomainError("alphabet size must lie in [1, 256]");
  }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// A block: a symbol for every element of a finite domain, stored in the domain's
/// canonical order.
class Pattern {
 public:
  Pattern(FiniteSubset domain, std::vector<std::uint8_t> values, Alphabet alphabet)
      : domain_(std::move(domain)), values_(std::move(values)), alphabet_(alphabet) {
    if (values_.size() != domain_.size()) throw DomainError("pattern values must cover the domain exactly");
    for (auto v : values_)
      if (v >= alphabet_.size) throw DomainError("pattern symbol outside the alphabet");
  }

  const FiniteSubset& domain() const noexcept { return domain_; }
  const std::vector<std::uint8_t>& values() const noexcept { return values_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::uint8_t at(std::size_t i) const noexcept { return values_[i]; }

  /// Symbol at g, or -1 when g is outside the domain.
  int value_at(const GroupElement& g) const noexcept {
    std::int64_t i = domain_.index_of(g);
    return i < 0 ? -1 : values_[static_cast<std::size_t>(i)];
  }

 private:
  FiniteSubset domain_;
  std::vector<std::uint8_t> values_;
  Alphabet alphabet_;
};

/// Finite-window restriction of a point of an array system: `rows` layers, each over its
/// own alphabet, indexed by window position.
class Configuration {
 public:
  Configuration(std::shared_ptr<const Window> window, std::vector<Alphabet> alphabets,
                std::vector<std::vector<std::uint8_t>> values)
      : window_(std::move(window)), alphabets_(std::move(alphabets)), values_(std::move(values)) {
    if (!window_) throw DomainError("configuration needs a window");
    if (alphabets_.empty() || alphabets_.size() != values_.size()) throw DomainError("configuration needs J >= 1 rows");
    for (std::size_t r = 0; r < values_.size(); ++r) {
      if (values_[r].size() != window_->size()) throw DomainError("row " + std::to_string(r) + " does not cover the window");
      for (auto v : values_[r])
        if (v >= alphabets_[r].size) throw DomainError("symbol outside the alphabet of row " + std::to_string(r));
    }
  }

  const Window& window() const noexcept { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const noexcept { return window_; }
  std::size_t rows() const noexcept { return values_.size(); }
  const Alphabet& alphabet(std::size_t row) const { return alphabets_.at(row); }
  const std::vector<Alphabet>& alphabets() const noexcept { return alphabets_; }
  const std::vector<std::uint8_t>& row(std::size_t r) const { return values_.at(r); }
  std::uint8_t at(std::size_t r, std::size_t cell) const noexcept { return values_[r][cell]; }

  /// y(D) on one row; D must lie inside the window.
  Pattern restrict(std::size_t r, const FiniteSubset& D) const {
    std::vector<std::uint8_t> vals;
    vals.reserve(D.size());
    for (const auto& g : D) {
      std::int64_t i = window_->index_of(g);
      if (i < 0) throw DomainError("restriction domain leaves the window");
      vals.push_back(values_.at(r)[static_cast<std::size_t>(i)]);
    }
    return Pattern(D, std::move(vals), alphabets_.at(r));
  }

 private:
  std::shared_ptr<const Window> window_;
  std::vector<Alphabet> alphabets_;
  std::vector<std::vector<std::uint8_t>> values_;
};

/// Number of g with Ag ⊆ B (the admissible positions of a block over A inside B).
inline std::int64_t admissible_positions(const FiniteSubset& B, const FiniteSubset& A) {
  B.same_group(A);
  if (A.empty() || B.empty()) return 0;
  const GroupElement a0_inv = inverse(B.group(), A[0]);
  std::int64_t n = 0;
  for (const auto& b : B) {
    const GroupElement g = multiply(B.group(), a0_inv, b);
    bool ok = true;
    for (std::size_t k = 1; k < A.size() && ok; ++k) ok = B.contains(multiply(B.group(), A[k], g));
    n += ok ? 1 : 0;
  }
  return n;
}

/// |{g ∈ B : Ag ⊆ B and P(ag) = Q(a) for all a ∈ A}|.
inline std::int64_t count_occurrences(const Pattern& P, const Pattern& Q) {
  const FiniteSubset& B = P.domain();
  const FiniteSubset& A = Q.domain();
  B.same_group(A);
  if (A.empty() || B.empty()) return 0;
  const GroupSpec& G = B.group();
  const GroupElement a0_inv = inverse(G, A[0]);
  std::int64_t n = 0;
  for (std::size_t bi = 0; bi < B.size(); ++bi) {
    if (P.at(bi) != Q.at(0)) continue;
    const GroupElement g = multiply(G, a0_inv, B[bi]);
    bool ok = true;
    for (std::size_t k = 1; k < A.size() && ok; ++k) ok = P.value_at(multiply(G, A[k], g)) == Q.at(k);
    n += ok ? 1 : 0;
  }
  return n;
}

/// fr_P(Q) = |{g ∈ B : Ag ⊆ B, P(Ag) = Q}| / |B|, normalized by the size of P's domain.
inline Rational pattern_frequency(const Pattern& P, const Pattern& Q) {
  if (!(P.alphabet() == Q.alphabet())) throw DomainError("patterns use different alphabets");
  if (P.domain().empty() || Q.domain().empty()) throw DomainError("pattern domains must be nonempty");
  return Rational(count_occurrences(P, Q), P.domain().ssize());
}

struct FrequencyLemmaReport {
  Rational fr_F;               // frequency of Q in y(F)
  Rational tile_avg;           // Σ occurrences / Σ |tile| over tiles contained in F
  Rational diff;               // |fr_F - tile_avg|
  Rational delta_used;         // ε / (3|A|)
  Rational coverage;           // |∪ tiles ⊆ F| / |F|
  std::int64_t tiles_inside = 0;
  bool shapes_invariant = false;  // every shape with a tile is (A, δ)-invariant
  bool coverage_ok = false;       // coverage ≥ 1 - 2ε/3
  bool hypotheses_met = false;
  bool pass = false;              // hypotheses ⟹ diff ≤ ε
};

/// Compares the frequency of Q over F with its size-weighted average over the disjoint
/// tiles contained in F, on one row of y.
inline FrequencyLemmaReport verify_frequency_lemma(const Configuration& y, const Quasitiling& tiling, const Pattern& Q,
                                                   const FiniteSubset& F, const Rational& eps, std::size_t row = 0) {
  if (eps <= Rational(0)) throw DomainError("eps must be positive");
  if (row >= y.rows()) throw DomainError("row index out of range");
  if (!(tiling.window().region() == y.window().region())) throw DomainError("tiling and configuration windows differ");
  if (F.empty()) throw DomainError("F must be nonempty");
  for (const auto& g : F)
    if (!y.window().contains(g)) throw DomainError("F is not contained in the window");
  if (Q.domain().empty()) throw DomainError("Q must have a nonempty domain");
  if (!(Q.alphabet() == y.alphabet(row))) throw DomainError("Q and the configuration row use different alphabets");

  const std::vector<Tile> tiles = tiling.tiles();
  if (!tiles_pairwise_disjoint(tiles, y.window().size())) throw DomainError("frequency lemma requires disjoint tiles");

  FrequencyLemmaReport r;
  r.fr_F = pattern_frequency(y.restrict(row, F), Q);
  r.delta_used = eps / Rational(3) / Rational(Q.domain().ssize());

  std::int64_t occ = 0, covered = 0;
  std::vector<char> level_used(tiling.levels(), 0);
  for (const auto& t : tiles) {
    const bool inside = std::all_of(t.cells.begin(), t.cells.end(),
                                    [&](std::int64_t c) { return F.contains(y.window().at(static_cast<std::size_t>(c))); });
    if (!inside) continue;
    ++r.tiles_inside;
    level_used[t.level] = 1;
    std::vector<GroupElement> elems;
    for (auto c : t.cells) elems.push_back(y.window().at(static_cast<std::size_t>(c)));
    occ += count_occurrences(y.restrict(row, FiniteSubset(y.window().group(), std::move(elems))), Q);
    covered += static_cast<std::int64_t>(t.cells.size());
  }
  r.tile_avg = covered > 0 ? Rational(occ, covered) : Rational(0);
  r.diff = r.fr_F >= r.tile_avg ? r.fr_F - r.tile_avg : r.tile_avg - r.fr_F;
  r.coverage = Rational(covered, F.ssize());

  r.shapes_invariant = true;
  for (std::size_t l = 0; l < tiling.levels(); ++l)
    if (level_used[l] && invariance_defect(tiling.shape(l), Q.domain()) > r.delta_used) r.shapes_invariant = false;
  r.coverage_ok = r.coverage >= Rational(1) - Rational(2) * eps / Rational(3);
  r.hypotheses_met = r.tiles_inside > 0 && r.shapes_invariant && r.coverage_ok;
  r.pass = !r.hypotheses_met || r.diff <= eps;
  return r;
}

}  // namespace quasitile
