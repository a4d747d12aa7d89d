#include "besum/dimension.hpp"

#include <cmath>
#include <gmpxx.h>

#include "besum/errors.hpp"

namespace besum {

namespace {

/// Neumaier-compensated running sum.
class LogSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    compensation_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

BigInt count_cylinders(const DigitConstraintSet& set, std::uint64_t j) {
  if (j < 2) throw DomainError("count_cylinders expects j >= 2");
  BigInt count = 1;
  for (auto max : set.max_digits(j)) count *= static_cast<unsigned long>(max + 1);
  return count;
}

ExactFraction cylinder_count_lower_bound(const DigitConstraintSet& set, std::uint64_t j) {
  BigInt denominator = 1;
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t fk = set.growth()(k);
    if (fk == kSaturated || fk + 1 > j) break;
    denominator *= static_cast<unsigned long>(fk + 1);
  }
  return make_fraction(factorial(j), denominator);
}

ExactFraction measure_of_cylinder(const DigitConstraintSet& set, const FactoradicReal& alpha, std::uint64_t i) {
  if (i < 2) throw DomainError("cylinder depth must be at least 2");
  if (alpha.tail() != TailPolicy::kZero) throw MembershipError("cylinder point must have a ZERO tail");
  for (std::size_t n = i + 1; n <= alpha.depth(); ++n) {
    if (alpha.digit(n) != 0) throw MembershipError("cylinder point is not in Z_" + std::to_string(i));
  }
  const auto caps = set.max_digits(i);
  for (std::size_t n = 2; n <= i; ++n) {
    if (alpha.digit(n) > caps[n - 2]) {
      throw MembershipError("digit s_" + std::to_string(n) + " exceeds its cap in E(f,a)");
    }
  }
  return make_fraction(1, count_cylinders(set, i));
}

ExactFraction measure_below(const DigitConstraintSet& set, const ExactFraction& x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  // Greedy digits of x, stopping once the remainder vanishes.
  const BigInt& q = x.get_den();
  BigInt r = x.get_num();
  BigInt digit;
  ExactFraction total = 0;
  ExactFraction prefix = 1;  // mu of the cylinder matching x's digits so far
  for (unsigned long m = 2; r != 0; ++m) {
    r *= m;
    mpz_fdiv_qr(digit.get_mpz_t(), r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
    const std::uint64_t max = set.max_digit(m);
    const std::uint64_t allowed = max + 1;
    const std::uint64_t s = digit.get_ui();
    if (s > max) {
      total += prefix;
      break;
    }
    total += prefix * make_fraction(BigInt(static_cast<unsigned long>(s)), BigInt(static_cast<unsigned long>(allowed)));
    prefix /= static_cast<unsigned long>(allowed);
  }
  return total;
}

ExactFraction interval_measure(const DigitConstraintSet& set, const ExactFraction& lo, const ExactFraction& hi) {
  if (hi <= lo) return 0;
  return measure_below(set, hi) - measure_below(set, lo);
}

MassCheckReport mass_check(const DigitConstraintSet& set, double s, std::uint64_t i0, std::uint64_t i_max,
                           std::uint64_t seed, std::size_t random_per_depth) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("mass_check expects 0 < s < 1");
  if (i0 < 2 || i0 >= i_max) throw DomainError("mass_check expects 2 <= i0 < i_max");

  MassCheckReport report;
  report.s = s;
  report.i0 = i0;
  report.i_max = i_max;

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));

  for (std::uint64_t i = i0; i < i_max; ++i) {
    const BigInt count_next = count_cylinders(set, i + 1);
    const BigInt fact_i = factorial(i);
    const BigInt fact_next = fact_i * static_cast<unsigned long>(i + 1);
    const BigInt fine = fact_next * static_cast<unsigned long>(i + 2) * static_cast<unsigned long>(i + 3);
    const ExactFraction rho_i = make_fraction(1, fact_i);
    const ExactFraction rho_next = make_fraction(1, fact_next);
    const ExactFraction rho_fine = make_fraction(1, fine);

    // log of 3 (1/i!)^{1-s} prod_{f(j) <= i} (f(j)+1)
    double log_chain = std::log(3.0) - (1.0 - s) * log_of(fact_i);
    for (std::uint64_t k = 1;; ++k) {
      const std::uint64_t fk = set.growth()(k);
      if (fk == kSaturated || fk > i) break;
      log_chain += std::log(static_cast<double>(fk + 1));
    }

    std::vector<std::pair<ExactFraction, ExactFraction>> intervals;
    auto add = [&](ExactFraction lo, const ExactFraction& length) {
      if (lo < 0) lo = 0;
      ExactFraction hi = lo + length;
      if (hi > 1) {
        hi = 1;
        lo = hi - length;
      }
      intervals.emplace_back(std::move(lo), std::move(hi));
    };

    // Edge cases around a random point of E at depth i+1.
    const FactoradicReal anchor = sample_E(set, i + 1, seed * 1000003u + i);
    const ExactFraction beta = decode(anchor).lower;
    const ExactFraction beta_i = beta - frac_part(beta * ExactFraction(fact_i)) * rho_i;
    add(beta_i, rho_i);
    add(beta_i - rho_next / 2, rho_i);
    add(beta - rho_fine, rho_next + 2 * rho_fine);
    add(beta, rho_next + rho_fine);

    const BigInt min_units = fine / fact_next;  // |B| = units/fine > rho_{i+1}
    const BigInt max_units = fine / fact_i;
    for (std::size_t t = 0; t < random_per_depth; ++t) {
      BigInt units = min_units + 1 + rng.get_z_range(max_units - min_units);
      BigInt start = rng.get_z_range(fine - units + 1);
      add(make_fraction(start, fine), make_fraction(units, fine));
    }

    for (const auto& [lo, hi] : intervals) {
      const ExactFraction length = hi - lo;
      const ExactFraction mu = interval_measure(set, lo, hi);
      ++report.intervals_tested;
      const double log_length = std::log(to_double(length));
      const double mu_d = to_double(mu);
      if (mu_d > 0.0) {
        report.a_constant = std::max(report.a_constant, std::exp(std::log(mu_d) - s * log_length));
      }
      const ExactFraction covering = (length * ExactFraction(fact_next) + 2) / ExactFraction(count_next);
      if (mu > covering) {
        report.violations.push_back({i, lo, hi, mu, to_double(covering)});
        continue;
      }
      const double log_bound = log_chain + s * log_length;
      if (mu_d > 0.0 && std::log(mu_d) > log_bound + 1e-12 * std::abs(log_bound)) {
        report.violations.push_back({i, lo, hi, mu, std::exp(log_bound)});
      }
    }
  }
  return report;
}

std::vector<DimensionPoint> dimension_lower_estimate(const DigitConstraintSet& set, std::uint64_t j_max) {
  if (j_max < 2) throw DomainError("dimension_lower_estimate expects j_max >= 2");
  const auto caps = set.max_digits(j_max);
  std::vector<DimensionPoint> out;
  out.reserve(j_max - 1);
  LogSum log_count;
  LogSum log_factorial;
  for (std::uint64_t j = 2; j <= j_max; ++j) {
    log_count.add(std::log(static_cast<double>(caps[j - 2] + 1)));
    log_factorial.add(std::log(static_cast<double>(j)));
    out.push_back({j, log_count.value() / log_factorial.value()});
  }
  return out;
}

ConditionIiResult condition_ii_check(const GrowthFunction& f, double eps, std::uint64_t i_max) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("condition_ii_check expects 0 < eps < 1");
  if (i_max < 1) throw DomainError("condition_ii_check expects i_max >= 1");
  ConditionIiResult out;
  out.series.reserve(i_max);
  LogSum product;
  LogSum log_factorial;
  std::uint64_t next_j = 1;
  std::uint64_t next_f = f(1);
  for (std::uint64_t i = 1; i <= i_max; ++i) {
    while (next_f != kSaturated && next_f <= i) {
      product.add(std::log(static_cast<double>(next_f) + 1.0));
      next_f = f(++next_j);
    }
    log_factorial.add(std::log(static_cast<double>(i)));
    const double g = product.value() - eps * log_factorial.value();
    out.series.push_back(g);
    if (i == 1 || g > out.sup_log) {
      out.sup_log = g;
      out.attained_at = i;
    }
  }
  return out;
}

}  // namespace besum
