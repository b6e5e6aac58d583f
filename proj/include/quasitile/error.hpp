#pragma once

#include <stdexcept>
#include <string>

namespace quasitile {

/// Precondition or domain violation (empty shape, mismatched groups, eps out of range...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coordinate left the signed 64-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An enumeration exceeded a documented cap. `cap()` names the cap.
class CapacityError : public std::length_error {
 public:
  CapacityError(std::string cap, const std::string& what)
      : std::length_error(what), cap_(std::move(cap)) {}
  const std::string& cap() const noexcept { return cap_; }

 private:
  std::string cap_;
};

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& msg) { throw DomainError(msg); }

inline void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace detail
}  // namespace quasitile
