#include "besum/expsum.hpp"

#include <cmath>
#include <numbers>

#include "besum/errors.hpp"

namespace besum {

Complex unit_phase(double turns) {
  turns -= std::floor(turns);
  const double quarters = 4.0 * turns;
  if (quarters == std::floor(quarters)) {
    static constexpr Complex kAxes[] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return kAxes[static_cast<int>(quarters) & 3];
  }
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

Angle Angle::rational(const ExactFraction& alpha) {
  if (alpha <= 0 || alpha >= 1) throw DomainError("angle must lie in (0,1), got " + to_string(alpha));
  return Angle(alpha, to_double(alpha));
}

Angle Angle::factoradic(const FactoradicReal& alpha) {
  Interval bounds = decode(alpha);
  if (bounds.upper == 0) throw DomainError("angle must lie in (0,1), got 0");
  return Angle(alpha, to_double(bounds.lower));
}

Angle Angle::parse(std::string_view text) { return rational(parse_fraction(text)); }

void SumTrace::Accumulator::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void SumTrace::push(double turns) { push(unit_phase(turns)); }

void SumTrace::push(Complex term) {
  re_.add(term.real());
  im_.add(term.imag());
  ++count_;
  const double modulus = std::abs(partial_sum());
  if (modulus > sup_modulus_) {
    sup_modulus_ = modulus;
    sup_at_ = count_;
  }
}

double dirichlet_bound(double alpha_turns) {
  const double s = std::sin(std::numbers::pi * alpha_turns);
  if (alpha_turns == std::floor(alpha_turns) || s == 0.0) {
    throw DomainError("dirichlet bound is undefined at integer alpha");
  }
  return 1.0 / std::abs(s);
}

double dirichlet_bound(const Angle& alpha) { return dirichlet_bound(alpha.turns()); }

Complex full_interval_sum(const Angle& alpha, std::uint64_t n) {
  if (n < 1) throw DomainError("full_interval_sum expects N >= 1");
  // e((N+1)a) needs (N+1)a mod 1; reduce exactly for rational angles.
  double shifted;
  if (alpha.is_rational()) {
    shifted = phase_of(BigInt(std::to_string(n + 1)), alpha.fraction());
  } else {
    const double raw = static_cast<double>(n + 1) * alpha.turns();
    shifted = raw - std::floor(raw);
  }
  const Complex ea = unit_phase(alpha.turns());
  return (unit_phase(shifted) - ea) / (ea - 1.0);
}

SumTrace stream_sum(std::span<const double> turns, SumTrace trace) {
  for (double t : turns) trace.push(t);
  return trace;
}

double phase_of(const BigInt& n, const ExactFraction& alpha) {
  BigInt residue = n * alpha.get_num();
  mpz_fdiv_r(residue.get_mpz_t(), residue.get_mpz_t(), alpha.get_den_mpz_t());
  return to_double(make_fraction(residue, alpha.get_den()));
}

std::vector<double> multiples_mod_one(const Angle& alpha, std::size_t last) {
  ExactFraction value = alpha.is_rational() ? alpha.fraction() : decode(alpha.digits()).lower;
  const BigInt& den = value.get_den();
  const BigInt& step = value.get_num();
  std::vector<double> out;
  out.reserve(last + 1);
  BigInt residue = 0;
  for (std::size_t n = 0; n <= last; ++n) {
    out.push_back(to_double(make_fraction(residue, den)));
    residue += step;
    if (residue >= den) residue -= den;
  }
  return out;
}

Complex set_sum(std::span<const BigInt> elements, const ExactFraction& alpha, const BigInt& threshold) {
  SumTrace trace;
  for (const auto& n : elements) {
    if (n <= threshold) trace.push(phase_of(n, alpha));
  }
  return trace.partial_sum();
}

std::pair<Complex, Complex> symmetry_check(std::span<const BigInt> elements, const ExactFraction& alpha,
                                           const BigInt& threshold) {
  if (alpha <= 0 || alpha >= 1) throw DomainError("symmetry_check expects alpha in (0,1)");
  const ExactFraction mirrored = ExactFraction(1) - alpha;
  return {std::conj(set_sum(elements, alpha, threshold)), set_sum(elements, mirrored, threshold)};
}

double qn_counterexample_sup(std::uint64_t q, const ExactFraction& alpha, std::uint64_t n_max) {
  if (q < 2) throw DomainError("qn_counterexample_sup expects q >= 2");
  // Phase of q*k*alpha advances by the fixed residue step = q*p mod den.
  const BigInt& den = alpha.get_den();
  BigInt step = BigInt(std::to_string(q)) * alpha.get_num();
  mpz_fdiv_r(step.get_mpz_t(), step.get_mpz_t(), den.get_mpz_t());
  BigInt residue = 0;
  SumTrace trace;
  for (std::uint64_t element = q; element <= n_max; element += q) {
    residue += step;
    if (residue >= den) residue -= den;
    trace.push(to_double(make_fraction(residue, den)));
  }
  return trace.sup_modulus();
}

}  // namespace besum
