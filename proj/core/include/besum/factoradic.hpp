#pragma once

// Factorial-base expansions of reals in [0,1):
//
//   alpha = sum_{n >= 2} s_n / n!,   0 <= s_n <= n - 1.
//
// A FactoradicReal holds the digits s_2..s_D and says what is known beyond D.
// With a ZERO tail the value is exactly the finite sum; with an UNKNOWN tail
// the value lies in [v, v + 1/D!] because the largest admissible tail sums to
// 1/D! (sum_{n>D} (n-1)/n! = 1/D!).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "besum/exact.hpp"

namespace besum {

enum class TailPolicy { kZero, kUnknown };

class FactoradicReal {
 public:
  static constexpr std::size_t kDefaultDepth = 32;

  /// `digits[k]` is s_{k+2}. Throws DomainError if a digit is out of range,
  /// or if the list is empty (depth must be at least 2).
  FactoradicReal(std::vector<std::uint32_t> digits, TailPolicy tail);

  /// D, the last explicitly known position.
  std::size_t depth() const noexcept { return digits_.size() + 1; }
  TailPolicy tail() const noexcept { return tail_; }

  /// Digits for positions 2..D.
  std::span<const std::uint32_t> digits() const noexcept { return digits_; }

  /// s_n for n >= 1. Positions past D read as 0 under a ZERO tail and throw
  /// InsufficientDepthError under an UNKNOWN tail.
  std::uint32_t digit(std::size_t n) const;

  bool operator==(const FactoradicReal&) const = default;

 private:
  std::vector<std::uint32_t> digits_;
  TailPolicy tail_;
};

struct Interval {
  ExactFraction lower;
  ExactFraction upper;
};

/// Exact {m! * alpha} within [value, value + error_bound].
struct FracEstimate {
  ExactFraction value;
  ExactFraction error_bound;
};

enum class Rationality { kRational, kNotRational, kUnknownAtDepth };

/// Greedy digit extraction: r <- x; s_n = floor(n r), r <- n r - s_n.
/// Tail is ZERO when the remainder reaches 0 by depth D.
FactoradicReal encode(const ExactFraction& x, std::size_t depth = FactoradicReal::kDefaultDepth);

Interval decode(const FactoradicReal& f);

/// sum_{m < i <= D} s_i m!/i!; the head sum_{i <= m} s_i m!/i! is an integer.
FracEstimate frac_factorial(std::uint64_t m, const FactoradicReal& f);

/// A finite prefix can confirm rationality (ZERO tail) but never refute it.
Rationality is_rational_by_digits(const FactoradicReal& f);

// Digit files:
//   factoradic v1
//   depth=<D>
//   tail=<ZERO|UNKNOWN>
//   <s_2> <s_3> ... <s_D>
FactoradicReal read_digit_file(std::istream& in);
FactoradicReal read_digit_file(const std::string& path);
void write_digit_file(std::ostream& out, const FactoradicReal& f);

}  // namespace besum
