#pragma once

// The cylinder measure on E(f,a) ∪ {0}. Every depth-i point alpha of
// (E ∪ {0}) ∩ Z_i carries mass 1/#((E ∪ {0}) ∩ Z_i) on [alpha, alpha + 1/i!).
// Since the number of admissible digits per position is fixed, the counts are
// products and mu is the law of independent uniform admissible digits.

#include <cstdint>
#include <string>
#include <vector>

#include "besum/construction.hpp"
#include "besum/exact.hpp"
#include "besum/factoradic.hpp"

namespace besum {

/// #((E ∪ {0}) ∩ Z_j) = prod_{m=2}^{j} allowed(m).
BigInt count_cylinders(const DigitConstraintSet& set, std::uint64_t j);

/// j! / prod_{f(k)+1 <= j} (f(k)+1), the lower bound the 0 digit guarantees.
ExactFraction cylinder_count_lower_bound(const DigitConstraintSet& set, std::uint64_t j);

/// mu((alpha, alpha + 1/i!)) for alpha in (E ∪ {0}) ∩ Z_i; MembershipError otherwise.
ExactFraction measure_of_cylinder(const DigitConstraintSet& set, const FactoradicReal& alpha, std::uint64_t i);

/// mu([0, x)) for rational x; x >= 1 gives 1.
ExactFraction measure_below(const DigitConstraintSet& set, const ExactFraction& x);

/// mu([lo, hi)).
ExactFraction interval_measure(const DigitConstraintSet& set, const ExactFraction& lo, const ExactFraction& hi);

struct MassViolation {
  std::uint64_t depth;
  ExactFraction lo;
  ExactFraction hi;
  ExactFraction mu;
  double bound;
};

struct MassCheckReport {
  double s = 0.0;
  std::uint64_t i0 = 0;
  std::uint64_t i_max = 0;
  /// max over tested B of mu(B) / |B|^s.
  double a_constant = 0.0;
  std::size_t intervals_tested = 0;
  std::vector<MassViolation> violations;
};

/// For i in [i0, i_max) tests intervals B with 1/(i+1)! < |B| <= 1/i! against
///   mu(B) <= (|B| (i+1)! + 2) / #((E ∪ {0}) ∩ Z_{i+1})            (exact)
///   mu(B) <= 3 (1/i!)^{1-s} prod_{f(j) <= i} (f(j)+1) |B|^s          (log-space)
/// B ranges over cylinder-aligned, boundary-straddling and random intervals.
MassCheckReport mass_check(const DigitConstraintSet& set, double s, std::uint64_t i0, std::uint64_t i_max,
                           std::uint64_t seed = 1, std::size_t random_per_depth = 64);

struct DimensionPoint {
  std::uint64_t j;
  double ratio;  ///< log #((E ∪ {0}) ∩ Z_j) / log j!
};

std::vector<DimensionPoint> dimension_lower_estimate(const DigitConstraintSet& set, std::uint64_t j_max);

struct ConditionIiResult {
  double sup_log = 0.0;
  std::uint64_t attained_at = 0;
  /// g(i) for i = 1..i_max at index i-1.
  std::vector<double> series;
};

/// g(i) = sum_{f(j) <= i} log(f(j)+1) - eps log i!, i = 1..i_max.
ConditionIiResult condition_ii_check(const GrowthFunction& f, double eps, std::uint64_t i_max);

}  // namespace besum
