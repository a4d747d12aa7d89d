#pragma once

// Partial exponential sums sum e(t_k), e(x) = exp(2 pi i x), with running
// supremum tracking and the geometric-series (Dirichlet) bounds.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "besum/exact.hpp"
#include "besum/factoradic.hpp"

namespace besum {

using Complex = std::complex<double>;

/// e(t) for t in turns.
Complex unit_phase(double turns);

/// alpha in (0,1), held exactly (p/q or a factoradic prefix) with a double
/// rendering used for term evaluation.
class Angle {
 public:
  static Angle rational(const ExactFraction& alpha);
  static Angle factoradic(const FactoradicReal& alpha);
  /// Parses "p/q". Throws ParseError / DomainError.
  static Angle parse(std::string_view text);

  double turns() const noexcept { return turns_; }
  bool is_rational() const noexcept { return std::holds_alternative<ExactFraction>(repr_); }
  const ExactFraction& fraction() const { return std::get<ExactFraction>(repr_); }
  const FactoradicReal& digits() const { return std::get<FactoradicReal>(repr_); }

 private:
  Angle(std::variant<ExactFraction, FactoradicReal> repr, double turns)
      : repr_(std::move(repr)), turns_(turns) {}

  std::variant<ExactFraction, FactoradicReal> repr_;
  double turns_;
};

/// Running state of sum e(t_1) + ... + e(t_N).
///
/// The sup is over prefixes, so the current modulus may be below it. Ties keep
/// the earliest index. Accumulation uses Neumaier compensation per component.
class SumTrace {
 public:
  void push(double turns);
  void push(Complex term);

  Complex partial_sum() const noexcept { return {re_.value(), im_.value()}; }
  std::uint64_t count() const noexcept { return count_; }
  double sup_modulus() const noexcept { return sup_modulus_; }
  std::uint64_t sup_at() const noexcept { return sup_at_; }

 private:
  class Accumulator {
   public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

   private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
  };

  Accumulator re_;
  Accumulator im_;
  std::uint64_t count_ = 0;
  double sup_modulus_ = 0.0;
  std::uint64_t sup_at_ = 0;
};

/// 2/|e(alpha) - 1| = 1/sin(pi alpha).
double dirichlet_bound(const Angle& alpha);
double dirichlet_bound(double alpha_turns);

/// sum_{n <= N} e(n alpha) = (e((N+1) alpha) - e(alpha)) / (e(alpha) - 1).
Complex full_interval_sum(const Angle& alpha, std::uint64_t n);

/// Feeds phases (already reduced mod 1 by the caller) into `trace`.
SumTrace stream_sum(std::span<const double> turns, SumTrace trace = {});

/// {n * alpha} exactly, as a double in [0,1).
double phase_of(const BigInt& n, const ExactFraction& alpha);

/// {n alpha} for n = 0..last, reduced exactly (for a factoradic alpha, from
/// the lower end of its interval).
std::vector<double> multiples_mod_one(const Angle& alpha, std::size_t last);

/// S_A(alpha, N) over the elements of A not exceeding `threshold`.
Complex set_sum(std::span<const BigInt> elements, const ExactFraction& alpha, const BigInt& threshold);

/// (conj S_A(alpha,N), S_A(1-alpha,N)); the two agree whenever A is a set of
/// integers.
std::pair<Complex, Complex> symmetry_check(std::span<const BigInt> elements, const ExactFraction& alpha,
                                           const BigInt& threshold);

/// sup_{N <= n_max} |S_{qZ}(alpha, N)| with A = {q, 2q, 3q, ...}. Bounded by
/// 2/|e(q alpha) - 1| when q alpha is not an integer, linear in n_max otherwise.
/// The result is an empirical sup over the explored range.
double qn_counterexample_sup(std::uint64_t q, const ExactFraction& alpha, std::uint64_t n_max);

}  // namespace besum
