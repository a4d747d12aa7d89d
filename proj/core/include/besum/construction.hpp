#pragma once

// The sets A(f) = {n + f(n)! : n >= 1} and the digit-constrained sets
//
//   E(f,a) = {alpha : s_{f(i)+1}(alpha) <= (f(i)+1)/a_i for all i >= 1},
//
// plus exact-phase evaluation of sum_{n <= N} e((n + f(n)!) alpha).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "besum/exact.hpp"
#include "besum/expsum.hpp"
#include "besum/factoradic.hpp"

namespace besum {

inline constexpr std::uint64_t kSaturated = UINT64_MAX;

/// Strictly increasing f: N -> N, evaluated with saturation at kSaturated.
class GrowthFunction {
 public:
  using Rule = std::function<std::uint64_t(std::uint64_t)>;

  GrowthFunction(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  const std::string& name() const noexcept { return name_; }
  std::uint64_t operator()(std::uint64_t n) const { return rule_(n); }

  /// Verifies f(1) >= 1, strict monotonicity and f(n) >= n for n <= n_max,
  /// stopping early once values saturate. Throws DomainError.
  void check(std::uint64_t n_max = 1'000'000) const;

 private:
  std::string name_;
  Rule rule_;
};

/// Positive weights a_n with sum 1/a_n < infinity.
class WeightSequence {
 public:
  using Rule = std::function<BigInt(std::uint64_t)>;

  WeightSequence(std::string name, Rule rule, double reciprocal_sum_bound)
      : name_(std::move(name)), rule_(std::move(rule)), reciprocal_sum_bound_(reciprocal_sum_bound) {}

  const std::string& name() const noexcept { return name_; }
  BigInt operator()(std::uint64_t n) const { return rule_(n); }

  /// Declared upper bound on sum_{n >= 1} 1/a_n.
  double reciprocal_sum_bound() const noexcept { return reciprocal_sum_bound_; }

  /// sum_{n <= N} 1/a_n, exact.
  ExactFraction partial_sum_reciprocals(std::uint64_t n) const;

 private:
  std::string name_;
  Rule rule_;
  double reciprocal_sum_bound_;
};

// Registries. Built-ins: growth "id", "n2", "n3", "pow2"; weights "n2", "n3",
// "pow2", "nlog2". Register plugins at startup, before any worker threads.
GrowthFunction growth_function(std::string_view name);
WeightSequence weight_sequence(std::string_view name);
std::vector<std::string> growth_function_names();
std::vector<std::string> weight_sequence_names();
void register_growth_function(GrowthFunction f);
void register_weight_sequence(WeightSequence a);

/// Per-position digit caps of E(f,a): position f(i)+1 admits 0..min(f(i), floor((f(i)+1)/a_i)),
/// every other position m admits 0..m-1.
class DigitConstraintSet {
 public:
  DigitConstraintSet(GrowthFunction f, WeightSequence a);

  const GrowthFunction& growth() const noexcept { return f_; }
  const WeightSequence& weights() const noexcept { return a_; }

  /// floor((f(i)+1)/a_i).
  BigInt cap(std::uint64_t i) const;

  /// The i with f(i)+1 == position, if any.
  std::optional<std::uint64_t> constraint_index(std::uint64_t position) const;

  std::uint64_t max_digit(std::uint64_t position) const;
  std::uint64_t allowed_count(std::uint64_t position) const { return max_digit(position) + 1; }

  /// max_digit for positions 2..depth (index k is position k+2).
  std::vector<std::uint64_t> max_digits(std::size_t depth) const;

 private:
  GrowthFunction f_;
  WeightSequence a_;
};

enum class Membership { kIn, kOut, kUnknownAtDepth };

Membership membership(const DigitConstraintSet& set, const FactoradicReal& alpha);

/// Uniform digits within the caps, tail ZERO; alpha = 0 is redrawn.
/// Deterministic for a given seed on a given standard library.
FactoradicReal sample_E(const DigitConstraintSet& set, std::size_t depth, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultBitBudget = 10'000'000;

/// n + f(n)! for n = 1..n_max. Throws ResourceError when f(n_max)! would
/// need more than `bit_budget` bits.
std::vector<BigInt> af_elements(const GrowthFunction& f, std::uint64_t n_max,
                                std::uint64_t bit_budget = kDefaultBitBudget);

/// Number of n with n + f(n)! <= threshold; converts an element threshold
/// into the index range of the af_sum_* functions.
std::uint64_t af_index_count(const GrowthFunction& f, const BigInt& threshold);

struct SumSnapshot {
  std::uint64_t n;
  Complex sum;
  double sup_modulus;
  std::uint64_t sup_at;
};

struct AfSum {
  SumTrace trace;
  /// Bound on |computed - true| caused by unknown digits (0 for exact phases).
  double phase_error = 0.0;
  std::vector<SumSnapshot> snapshots;

  Complex sum() const { return trace.partial_sum(); }
};

/// sum_{n <= N} e((n + f(n)!) p/q), each phase reduced exactly mod q.
/// Requires 2 <= q < 2^32. `checkpoints` (ascending) select snapshots.
AfSum af_sum_rational(const GrowthFunction& f, std::uint64_t p, std::uint64_t q, std::uint64_t n,
                      std::span<const std::uint64_t> checkpoints = {});

/// |sum_{n<q} e((n + f(n)!) p/q)| + 2/|e(p/q)-1| + 1: dominates every partial
/// sum of af_sum_rational, since n + f(n)! = n (mod q) once f(n) >= q.
double rational_sum_bound(const GrowthFunction& f, std::uint64_t p, std::uint64_t q);

/// Same sum for a factoradic alpha; {f(n)! alpha} comes from frac_factorial.
/// With an UNKNOWN tail requires depth >= f(N) + 2 (InsufficientDepthError).
AfSum af_sum_factoradic(const GrowthFunction& f, const FactoradicReal& alpha, std::uint64_t n,
                        std::span<const std::uint64_t> checkpoints = {});

/// (2/|e(alpha)-1|) (1 + 4 pi sum_{n<=N} (1/a_n + e/(f(n)+1))).
double bound_theoretical(const GrowthFunction& f, const WeightSequence& a, const Angle& alpha,
                         std::uint64_t n);

/// {f(n)! alpha} <= 1/a_n + e/(f(n)+1) with e replaced by e_upper_bound().
struct DigitTailCheck {
  ExactFraction lhs;
  ExactFraction rhs;
  bool holds;
};

DigitTailCheck digit_tail_check(const GrowthFunction& f, const WeightSequence& a,
                                const FactoradicReal& alpha, std::uint64_t n);

}  // namespace besum
