#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "quasitile/symbolic.hpp"

namespace quasitile {

inline constexpr std::int64_t kPatternSpaceCap = std::int64_t{1} << 24;

namespace detail {

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double neg_p_log_p(double p) noexcept { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace detail

/// Probability weights over outcomes 0..n-1.
class Distribution {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit Distribution(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw DomainError("distribution needs at least one outcome");
    detail::CompensatedSum s;
    for (double p : w_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("distribution weights must be finite and nonnegative");
      s.add(p);
    }
    if (std::fabs(s.value() - 1.0) > kTolerance) throw DomainError("distribution weights must sum to 1");
  }

  const std::vector<double>& weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }

 private:
  std::vector<double> w_;
};

/// H(p) = -Σ p ln p, with 0 ln 0 = 0.
inline double shannon_entropy(const Distribution& d) {
  detail::CompensatedSum s;
  for (double p : d.weights()) s.add(detail::neg_p_log_p(p));
  return s.value();
}

/// Joint weights over pairs (a, b).
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> entries)
      : entries_(std::move(entries)) {
    std::vector<double> w;
    w.reserve(entries_.size());
    for (const auto& e : entries_) w.push_back(e.second);
    Distribution check(std::move(w));  // validates
    std::sort(entries_.begin(), entries_.end());
  }

  const auto& entries() const noexcept { return entries_; }

  Distribution flattened() const {
    std::vector<double> w;
    for (const auto& e : entries_) w.push_back(e.second);
    return Distribution(std::move(w));
  }

  /// Marginal over b, in increasing b.
  std::map<std::int64_t, double> marginal_b() const {
    std::map<std::int64_t, detail::CompensatedSum> acc;
    for (const auto& [ab, p] : entries_) acc[ab.second].add(p);
    std::map<std::int64_t, double> out;
    for (const auto& [b, s] : acc) out[b] = s.value();
    return out;
  }

 private:
  std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> entries_;
};

/// H(A|B) = Σ_b μ(b) H(μ(·|b)).
inline double conditional_entropy(const JointDistribution& joint) {
  const auto mb = joint.marginal_b();
  detail::CompensatedSum total;
  for (const auto& [b, pb] : mb) {
    if (pb <= 0.0) continue;
    detail::CompensatedSum h;
    for (const auto& [ab, p] : joint.entries())
      if (ab.second == b) h.add(detail::neg_p_log_p(p / pb));
    total.add(pb * h.value());
  }
  return total.value();
}

/// Size of the pattern space ∏ over cells, or CapacityError once it exceeds 2^24.
inline std::int64_t pattern_space_size(const std::vector<std::int64_t>& radices) {
  std::int64_t n = 1;
  for (auto r : radices) {
    if (r > 1 && n > kPatternSpaceCap / r)
      throw CapacityError("pattern-space", "pattern space exceeds the enumeration cap 2^24");
    n *= r;
  }
  if (n > kPatternSpaceCap) throw CapacityError("pattern-space", "pattern space exceeds the enumeration cap 2^24");
  return n;
}

/// H_n = H(p^{⊗F_n}) / |F_n| computed from the full product distribution over all
/// |Λ|^|F_n| patterns.
inline double bernoulli_entropy_exact(const Distribution& p, const FiniteSubset& F_n) {
  if (F_n.empty()) throw DomainError("F_n must be nonempty");
  const auto cells = F_n.size();
  pattern_space_size(std::vector<std::int64_t>(cells, static_cast<std::int64_t>(p.size())));
  const auto& w = p.weights();
  const std::size_t q = w.size();
  // Prefix products along an odometer; prob[i] = ∏_{j<i} w[digit_j].
  std::vector<std::size_t> digit(cells, 0);
  std::vector<double> prob(cells + 1, 1.0);
  for (std::size_t i = 0; i < cells; ++i) prob[i + 1] = prob[i] * w[0];
  detail::CompensatedSum s;
  while (true) {
    s.add(detail::neg_p_log_p(prob[cells]));
    std::size_t i = cells;
    while (i > 0 && digit[i - 1] + 1 == q) {
      digit[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++digit[i - 1];
    for (std::size_t j = i - 1; j < cells; ++j) prob[j + 1] = prob[j] * w[digit[j]];
  }
  return s.value() / static_cast<double>(cells);
}

struct EmpiricalEntropyReport {
  double h_n_hat = 0.0;
  std::int64_t sample_count = 0;
  std::int64_t distinct_patterns = 0;
};

/// Plug-in estimate: entropy of the empirical distribution of F_n-patterns (joint over
/// all rows) over translates F_n g ⊆ W, divided by |F_n|.
inline EmpiricalEntropyReport empirical_entropy_rate(const Configuration& y, const FiniteSubset& F_n) {
  const Window& W = y.window();
  W.region().same_group(F_n);
  if (F_n.empty()) throw DomainError("F_n must be nonempty");
  std::vector<std::int64_t> radices;
  for (std::size_t r = 0; r < y.rows(); ++r)
    for (std::size_t k = 0; k < F_n.size(); ++k) radices.push_back(y.alphabet(r).size);
  pattern_space_size(radices);
  const FiniteSubset inner = interior(W, F_n);
  if (inner.empty()) throw DomainError("interior(window, F_n) is empty");

  std::vector<std::int64_t> codes;
  codes.reserve(inner.size());
  std::vector<std::size_t> cells(F_n.size());
  for (const auto& g : inner) {
    for (std::size_t k = 0; k < F_n.size(); ++k)
      cells[k] = static_cast<std::size_t>(W.index_of(multiply(W.group(), F_n[k], g)));
    std::int64_t code = 0;
    for (std::size_t r = 0; r < y.rows(); ++r)
      for (auto c : cells) code = code * y.alphabet(r).size + y.at(r, c);
    codes.push_back(code);
  }
  std::sort(codes.begin(), codes.end());
  EmpiricalEntropyReport rep;
  rep.sample_count = static_cast<std::int64_t>(codes.size());
  const double n = static_cast<double>(codes.size());
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < codes.size();) {
    std::size_t j = i;
    while (j < codes.size() && codes[j] == codes[i]) ++j;
    s.add(detail::neg_p_log_p(static_cast<double>(j - i) / n));
    ++rep.distinct_patterns;
    i = j;
  }
  rep.h_n_hat = s.value() / static_cast<double>(F_n.size());
  return rep;
}

}  // namespace quasitile
