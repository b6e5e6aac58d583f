#include <gtest/gtest.h>

#include <memory>

#include "quasitile.hpp"
#include "quasitile/verify.hpp"

using namespace quasitile;

namespace {

const GroupSpec Z1 = GroupSpec::zd(1);
const GroupSpec Z2 = GroupSpec::zd(2);
const GroupSpec H3 = GroupSpec::heisenberg();

Pattern word(const std::string& s, std::int64_t alphabet = 2) {
  std::vector<std::uint8_t> v;
  for (char c : s) v.push_back(static_cast<std::uint8_t>(c - 'a'));
  return Pattern(FiniteSubset::box(Z1, {0}, {static_cast<std::int64_t>(s.size())}), v, Alphabet(alphabet));
}

// Oracle: count g over a brute candidate set, testing Ag ⊆ B and symbol equality pointwise.
std::int64_t brute_occurrences(const Pattern& P, const Pattern& Q) {
  const GroupSpec& G = P.domain().group();
  std::int64_t n = 0;
  std::vector<GroupElement> cand;
  for (const auto& b : P.domain())
    for (const auto& a : Q.domain()) cand.push_back(multiply(G, inverse(G, a), b));
  for (const auto& g : FiniteSubset(G, cand)) {
    bool ok = true;
    for (std::size_t k = 0; k < Q.domain().size() && ok; ++k) {
      const int v = P.value_at(multiply(G, Q.domain()[k], g));
      ok = v == Q.at(k);
    }
    n += ok ? 1 : 0;
  }
  return n;
}

Pattern random_pattern(const FiniteSubset& D, Rng& rng, std::int64_t q) {
  std::vector<std::uint8_t> v;
  for (std::size_t i = 0; i < D.size(); ++i) v.push_back(static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(q))));
  return Pattern(D, v, Alphabet(q));
}

std::shared_ptr<const Window> interval(std::int64_t lo, std::int64_t hi) {
  return std::make_shared<const Window>(Window::box(Z1, std::vector<std::int64_t>{lo}, std::vector<std::int64_t>{hi}));
}

Configuration random_binary(const std::shared_ptr<const Window>& W, Rng& rng) {
  std::vector<std::uint8_t> v(W->size());
  for (auto& x : v) x = static_cast<std::uint8_t>(rng.below(2));
  return Configuration(W, {Alphabet(2)}, {v});
}

FiniteSubset z1_grid(std::int64_t lo, std::int64_t hi, std::int64_t step) {
  std::vector<GroupElement> v;
  for (std::int64_t x = lo; x < hi; x += step) v.push_back({x});
  return FiniteSubset(Z1, v);
}

}  // namespace

TEST(Alphabet, Bounds) {
  EXPECT_THROW(Alphabet(0), DomainError);
  EXPECT_THROW(Alphabet(257), DomainError);
  EXPECT_EQ(Alphabet(256).size, 256);
}

TEST(PatternFrequency, Examples) {
  EXPECT_EQ(pattern_frequency(word("abab"), word("ab")), Rational(1, 2));
  EXPECT_EQ(pattern_frequency(word("abab"), word("abab")), Rational(1, 4));
  EXPECT_EQ(pattern_frequency(word("aaaa", 3), word("c", 3)), Rational(0));
}

TEST(PatternFrequency, Errors) {
  EXPECT_THROW(pattern_frequency(word("abab", 2), word("ab", 3)), DomainError);
  EXPECT_THROW(Pattern(FiniteSubset::box(Z1, {0}, {2}), {0}, Alphabet(2)), DomainError);
  EXPECT_THROW(Pattern(FiniteSubset::box(Z1, {0}, {1}), {2}, Alphabet(2)), DomainError);
}

TEST(PatternFrequency, MatchesBruteForce) {
  Rng rng(51);
  for (const auto& G : {Z1, Z2, H3})
    for (int i = 0; i < 200; ++i) {
      const FiniteSubset B = FiniteSubset::cube(G, G == Z1 ? 12 : 3);
      std::vector<GroupElement> a{identity(G)};
      for (auto k = rng.range(0, 2); k-- > 0;) {
        GroupElement g = GroupElement::zero(G.rank());
        for (std::size_t c = 0; c < G.rank(); ++c) g[c] = rng.range(-1, 1);
        a.push_back(g);
      }
      const Pattern P = random_pattern(B, rng, 2), Q = random_pattern(FiniteSubset(G, a), rng, 2);
      EXPECT_EQ(count_occurrences(P, Q), brute_occurrences(P, Q));
    }
}

TEST(PatternFrequency, SumOverAllPatternsIsAdmissibleFraction) {
  Rng rng(52);
  for (const auto& G : {Z1, Z2}) {
    const FiniteSubset B = FiniteSubset::cube(G, G == Z1 ? 16 : 5);
    const Pattern P = random_pattern(B, rng, 3);
    const FiniteSubset A = G == Z1 ? FiniteSubset::box(Z1, {0}, {3}) : FiniteSubset(Z2, {{0, 0}, {1, 0}, {0, 1}});
    Rational total(0);
    const std::int64_t space = pattern_space_size(std::vector<std::int64_t>(A.size(), 3));
    for (std::int64_t code = 0; code < space; ++code) {
      std::vector<std::uint8_t> v;
      for (std::int64_t c = code, k = 0; k < A.ssize(); ++k, c /= 3) v.push_back(static_cast<std::uint8_t>(c % 3));
      const Rational f = pattern_frequency(P, Pattern(A, v, Alphabet(3)));
      EXPECT_LE(f, Rational(admissible_positions(B, A), B.ssize()));
      total = total + f;
    }
    EXPECT_EQ(total, Rational(admissible_positions(B, A), B.ssize()));
  }
}

TEST(Configuration, RestrictAndValidate) {
  const auto W = interval(0, 6);
  const Configuration y(W, {Alphabet(2), Alphabet(3)}, {{0, 1, 0, 1, 0, 1}, {2, 2, 1, 0, 0, 1}});
  EXPECT_EQ(y.restrict(1, FiniteSubset::box(Z1, {1}, {3})).values(), (std::vector<std::uint8_t>{2, 1}));
  EXPECT_THROW(y.restrict(0, FiniteSubset::box(Z1, {4}, {8})), DomainError);
  EXPECT_THROW(Configuration(W, {Alphabet(2)}, {{0, 1, 2, 0, 0, 0}}), DomainError);
  EXPECT_THROW(Configuration(W, {Alphabet(2)}, {{0, 1}}), DomainError);
  EXPECT_THROW(Configuration(W, {}, {}), DomainError);
}

TEST(FrequencyLemma, SingleCellPatternOnExactTiling) {
  Rng rng(53);
  const auto W = interval(0, 100);
  const Configuration y = random_binary(W, rng);
  const Quasitiling T({FiniteSubset::box(Z1, {0}, {20})}, {z1_grid(0, 100, 20)}, W);
  const Pattern Q(FiniteSubset::singleton(Z1, identity(Z1)), {1}, Alphabet(2));
  const auto r = verify_frequency_lemma(y, T, Q, W->region(), Rational(3, 10));
  EXPECT_EQ(r.diff, Rational(0));
  EXPECT_EQ(r.tiles_inside, 5);
  EXPECT_TRUE(r.pass);
}

TEST(FrequencyLemma, Z1PairPatternAgainstBruteForce) {
  Rng rng(54);
  const auto W = interval(0, 100);
  const Quasitiling T({FiniteSubset::box(Z1, {0}, {20})}, {z1_grid(0, 100, 20)}, W);
  const Rational eps(3, 10);
  for (int i = 0; i < 20; ++i) {
    const Configuration y = random_binary(W, rng);
    const Pattern Q = random_pattern(FiniteSubset::box(Z1, {0}, {2}), rng, 2);
    const auto r = verify_frequency_lemma(y, T, Q, W->region(), eps);
    // Both sides recounted by brute force.
    const Pattern P = y.restrict(0, W->region());
    EXPECT_EQ(r.fr_F, Rational(brute_occurrences(P, Q), 100));
    std::int64_t occ = 0;
    for (std::int64_t c = 0; c < 100; c += 20) occ += brute_occurrences(y.restrict(0, FiniteSubset::box(Z1, {c}, {c + 20})), Q);
    EXPECT_EQ(r.tile_avg, Rational(occ, 100));
    // defect([0,20), [0,2)) = 1/20 ≤ ε/(3·2) = 1/20 and coverage is 1.
    EXPECT_TRUE(r.hypotheses_met);
    EXPECT_LE(r.diff, eps);
    EXPECT_TRUE(r.pass);
  }
}

TEST(FrequencyLemma, BrokenCoverageIsVacuous) {
  Rng rng(55);
  const auto W = interval(0, 100);
  const Configuration y = random_binary(W, rng);
  const Quasitiling T({FiniteSubset::box(Z1, {0}, {25})}, {z1_grid(0, 50, 25)}, W);
  const Pattern Q = word("ab");
  const auto r = verify_frequency_lemma(y, T, Q, W->region(), Rational(3, 10));
  EXPECT_EQ(r.coverage, Rational(1, 2));
  EXPECT_FALSE(r.hypotheses_met);
  EXPECT_TRUE(r.pass);
}

TEST(FrequencyLemma, Errors) {
  Rng rng(56);
  const auto W = interval(0, 40);
  const Configuration y = random_binary(W, rng);
  const Quasitiling T({FiniteSubset::box(Z1, {0}, {10})}, {z1_grid(0, 40, 10)}, W);
  const Quasitiling overlap({FiniteSubset::box(Z1, {0}, {10})}, {FiniteSubset(Z1, {{0}, {5}})}, W);
  EXPECT_THROW(verify_frequency_lemma(y, T, word("ab"), FiniteSubset::box(Z1, {30}, {50}), Rational(1, 3)), DomainError);
  EXPECT_THROW(verify_frequency_lemma(y, T, word("ab", 3), W->region(), Rational(1, 3)), DomainError);
  EXPECT_THROW(verify_frequency_lemma(y, T, word("ab"), W->region(), Rational(0)), DomainError);
  EXPECT_THROW(verify_frequency_lemma(y, overlap, word("ab"), W->region(), Rational(1, 3)), DomainError);
}

TEST(FrequencyLemma, RandomSuite) {
  const auto r = verify::frequency_lemma_suite({.trials = 40, .seed = 57, .eps = {}, .group = {}});
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.hypotheses_met, 40);
}
