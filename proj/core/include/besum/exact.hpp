#pragma once

// Exact integer and rational carriers shared by every module.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace besum {

using BigInt = mpz_class;

/// Canonical reduced rational with positive denominator.
using ExactFraction = mpq_class;

/// Builds num/den in canonical form. Throws DomainError if den == 0.
ExactFraction make_fraction(const BigInt& num, const BigInt& den);

/// Parses "p/q", "p", or "-p/q". Throws ParseError on malformed text.
ExactFraction parse_fraction(std::string_view text);

std::string to_string(const ExactFraction& x);
std::string to_string(const BigInt& x);

/// Fractional part {x} = x - floor(x), always in [0,1).
ExactFraction frac_part(const ExactFraction& x);

/// Double rendering; truncates toward zero, so within one ulp.
double to_double(const ExactFraction& x);

BigInt factorial(std::uint64_t n);

/// Natural log of a positive big integer, accurate to ~1e-15 relative.
double log_of(const BigInt& x);

/// Rational upper bound 271828182846/10^11 on Euler's number.
const ExactFraction& e_upper_bound();

}  // namespace besum
