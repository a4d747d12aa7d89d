#include <cmath>

#include "doctest.h"

#include "besum/dimension.hpp"
#include "besum/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace besum;

namespace {

ExactFraction frac(long p, long q) { return make_fraction(BigInt(p), BigInt(q)); }

const auto square = [](unsigned long n) { return n * n; };

struct Case {
  const char* f;
  const char* a;
  std::function<unsigned long(unsigned long)> f_rule;
  std::function<mpz_class(unsigned long)> a_rule;
};

std::vector<Case> cases() {
  return {
      {"n2", "n2", square, [](unsigned long n) { return mpz_class(n * n); }},
      {"n2", "pow2", square, [](unsigned long n) { return mpz_class(mpz_class(1) << n); }},
      {"n2", "n3", square, [](unsigned long n) { return mpz_class(n * n * n); }},
      {"id", "n2", [](unsigned long n) { return n; }, [](unsigned long n) { return mpz_class(n * n); }},
  };
}

}  // namespace

TEST_CASE("cylinder count example") {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  CHECK(count_cylinders(e2, 5) == 48);
  CHECK(cylinder_count_lower_bound(e2, 5) == 12);
  CHECK_THROWS_AS(count_cylinders(e2, 1), DomainError);
}

TEST_CASE("cylinder measure of a point") {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  const FactoradicReal alpha({1, 2, 3, 0, 0}, TailPolicy::kZero);
  CHECK(measure_of_cylinder(e2, alpha, 5) == frac(1, 48));
  CHECK(measure_of_cylinder(e2, alpha, 4) == frac(1, 24));
  CHECK_THROWS_AS(measure_of_cylinder(e2, FactoradicReal({1, 2, 3, 2}, TailPolicy::kZero), 5), MembershipError);
  CHECK_THROWS_AS(measure_of_cylinder(e2, alpha, 3), MembershipError);
  CHECK_THROWS_AS(measure_of_cylinder(e2, FactoradicReal({1, 2, 3}, TailPolicy::kUnknown), 4), MembershipError);
}

TEST_CASE("property: cylinder counts match brute-force enumeration") {
  for (const auto& c : cases()) {
    const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
    for (std::uint64_t j = 2; j <= 9; ++j) {
      const auto cap = oracle::caps(c.f_rule, c.a_rule, j);
      CHECK(count_cylinders(set, j) == oracle::brute_count(cap, j));
      const auto got = set.max_digits(j);
      CHECK(std::vector<std::uint64_t>(got.begin(), got.end()) == cap);
    }
  }
}

TEST_CASE("property: count dominates the factorial lower bound") {
  for (const auto& c : cases()) {
    const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
    for (std::uint64_t j = 2; j <= 30; ++j) CHECK(ExactFraction(count_cylinders(set, j)) >= cylinder_count_lower_bound(set, j));
  }
}

TEST_CASE("property: total mass and subdivision") {
  for (const auto& c : cases()) {
    const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
    CHECK(interval_measure(set, 0, 1) == 1);
    CHECK(measure_below(set, 0) == 0);
    CHECK(measure_below(set, 2) == 1);
    for (std::uint64_t i = 2; i <= 7; ++i) {
      const auto cap = set.max_digits(i + 1);
      oracle::each_admissible(cap, i, [&](const std::vector<std::uint32_t>& digits) {
        const FactoradicReal point(digits, TailPolicy::kZero);
        const ExactFraction whole = measure_of_cylinder(set, point, i);
        ExactFraction parts = 0;
        for (std::uint32_t s = 0; s <= cap[i - 1]; ++s) {
          auto child = digits;
          child.push_back(s);
          parts += measure_of_cylinder(set, FactoradicReal(child, TailPolicy::kZero), i + 1);
        }
        CHECK(parts == whole);
        const ExactFraction lo = oracle::value_of(digits);
        CHECK(interval_measure(set, lo, lo + make_fraction(1, factorial(i))) == whole);
      });
    }
  }
}

TEST_CASE("property: interval measure matches cylinder summation on a grid") {
  testing::Gen gen(17);
  for (const auto& c : cases()) {
    const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t depth = gen.uniform(3, 7);
      const BigInt grid = factorial(depth);
      ExactFraction lo = gen.fraction_in_unit(grid);
      ExactFraction hi = gen.fraction_in_unit(grid);
      if (hi < lo) std::swap(lo, hi);
      const auto cap = oracle::caps(c.f_rule, c.a_rule, depth);
      CHECK(interval_measure(set, lo, hi) == oracle::grid_measure(cap, depth, lo, hi));
    }
  }
}

TEST_CASE("property: measure is monotone under inclusion") {
  testing::Gen gen(18);
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  for (int trial = 0; trial < 300; ++trial) {
    const BigInt den(static_cast<unsigned long>(gen.uniform(2, 100000)));
    std::vector<ExactFraction> pts{gen.fraction_in_unit(den), gen.fraction_in_unit(den), gen.fraction_in_unit(den),
                                   gen.fraction_in_unit(den)};
    std::sort(pts.begin(), pts.end());
    CHECK(interval_measure(e2, pts[1], pts[2]) <= interval_measure(e2, pts[0], pts[3]));
    CHECK(interval_measure(e2, pts[0], pts[2]) == interval_measure(e2, pts[0], pts[1]) + interval_measure(e2, pts[1], pts[2]));
  }
}

TEST_CASE("mass distribution check finds no violations") {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  const auto report = mass_check(e2, 0.5, 3, 8, 1, 32);
  CHECK(report.violations.empty());
  CHECK(report.intervals_tested > 0);
  CHECK(report.a_constant > 0.0);
  CHECK_THROWS_AS(mass_check(e2, 1.5, 3, 8), DomainError);
}

TEST_CASE("dimension series") {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  const auto series = dimension_lower_estimate(e2, 200);
  REQUIRE(series.size() == 199);
  CHECK(series.front().j == 2);
  CHECK(series[3].ratio == doctest::Approx(std::log(48.0) / std::log(120.0)).epsilon(1e-12));
  CHECK(series[8].ratio == doctest::Approx(std::log(count_cylinders(e2, 10).get_d()) / std::log(3628800.0)).epsilon(1e-12));
  CHECK(series.back().ratio >= 0.95);
  for (const auto& p : series) CHECK(p.ratio <= 1.0 + 1e-12);
}

TEST_CASE("condition ii statistic") {
  const auto square_growth = growth_function("n2");
  const auto r = condition_ii_check(square_growth, 0.5, 10000);
  CHECK(r.series.size() == 10000);
  CHECK(r.attained_at == 4);
  // g(1) = log 2, g(4) = log 2 + log 5 - 0.5 log 24.
  CHECK(r.series[0] == doctest::Approx(std::log(2.0)));
  CHECK(r.series[3] == doctest::Approx(std::log(10.0) - 0.5 * std::log(24.0)));
  CHECK_THROWS_AS(condition_ii_check(square_growth, 1.0, 10), DomainError);
}
