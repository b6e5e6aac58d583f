#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "quasitile/checked.hpp"
#include "quasitile/error.hpp"

namespace quasitile {

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Intermediate products use 128-bit integers; a result that does not fit
/// after reduction throws OverflowError.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integer
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Parses "3", "-2/7", "0.125" exactly.
  static Rational parse(std::string_view s) {
    auto fail = [&] { throw DomainError("cannot parse rational '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(s.substr(0, slash), fail), parse_int(s.substr(slash + 1), fail));
    }
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(s, fail));
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.size() > 17 || frac.empty()) fail();
    bool neg = !whole.empty() && whole.front() == '-';
    if (neg || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
    std::int64_t w = whole.empty() ? 0 : parse_int(whole, fail);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t f = parse_int(frac, fail);
    Rational r(detail::narrow(static_cast<__int128>(w) * scale + f), scale);
    return neg ? -r : r;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const { return Rational(detail::checked_neg(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  template <class Fail>
  static std::int64_t parse_int(std::string_view s, Fail fail) {
    if (s.empty()) fail();
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
      if (s.size() == 1) fail();
    }
    __int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') fail();
      v = v * 10 + (s[i] - '0');
      if (v > INT64_MAX) throw OverflowError("integer literal out of range");
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = detail::narrow(n);
    r.den_ = detail::narrow(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Compares count/size against a rational threshold without building a Rational.
/// Returns the sign of (count * t.den - t.num * size).
inline int compare_fraction(std::int64_t count, std::int64_t size, const Rational& t) {
  __int128 l = static_cast<__int128>(count) * t.den();
  __int128 r = static_cast<__int128>(t.num()) * size;
  return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace quasitile
