#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace besum {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured resource budget (big-integer bits).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Not enough factoradic digits are known to answer the question.
class InsufficientDepthError : public Error {
 public:
  InsufficientDepthError(const std::string& what, std::uint64_t required_depth)
      : Error(what + " (need depth >= " + std::to_string(required_depth) + ")"),
        required_depth_(required_depth) {}

  std::uint64_t required_depth() const noexcept { return required_depth_; }

 private:
  std::uint64_t required_depth_;
};

/// Malformed digit file, coefficient stream, or textual number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A point is not in the set an operation requires it to belong to.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A claimed ultimate period does not hold on the available prefix.
class InvalidPeriodError : public Error {
 public:
  using Error::Error;
};

}  // namespace besum
