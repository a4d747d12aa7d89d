#pragma once

// Independent reference computations. Each one works from definitions with
// plain big-integer arithmetic and shares no code path with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace besum::oracle {

inline mpz_class fact(unsigned long n) {
  mpz_class out = 1;
  for (unsigned long k = 2; k <= n; ++k) out *= k;
  return out;
}

inline mpz_class floor_of(const mpq_class& x) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

inline mpq_class frac_of(const mpq_class& x) { return x - mpq_class(floor_of(x)); }

/// s_n = floor(n! x) - n floor((n-1)! x), positions 2..depth.
inline std::vector<std::uint32_t> digits_of(const mpq_class& x, std::size_t depth) {
  std::vector<std::uint32_t> out;
  for (unsigned long n = 2; n <= depth; ++n) {
    const mpz_class hi = floor_of(x * mpq_class(fact(n)));
    const mpz_class lo = floor_of(x * mpq_class(fact(n - 1)));
    const mpz_class s = hi - mpz_class(n) * lo;
    out.push_back(static_cast<std::uint32_t>(s.get_ui()));
  }
  return out;
}

/// sum s_n / n! with a fresh factorial per term.
inline mpq_class value_of(const std::vector<std::uint32_t>& digits) {
  mpq_class out = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    mpq_class term(mpz_class(digits[k]), fact(k + 2));
    term.canonicalize();
    out += term;
  }
  return out;
}

/// {m! p/q} = (m! p mod q) / q.
inline mpq_class frac_factorial(unsigned long m, const mpq_class& x) {
  mpz_class r = fact(m) * x.get_num();
  mpz_class q = x.get_den();
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
  mpq_class out(r, q);
  out.canonicalize();
  return out;
}

/// Partial sums of e((n + f(n)!) p/q), n = 1..N, from the full integers.
inline std::vector<std::complex<long double>> af_partial_sums(const std::function<unsigned long(unsigned long)>& f,
                                                              unsigned long p, unsigned long q, unsigned long n_max) {
  std::vector<std::complex<long double>> out;
  std::complex<long double> total = 0;
  for (unsigned long n = 1; n <= n_max; ++n) {
    mpz_class element = mpz_class(n) + fact(f(n));
    mpz_class r = element * p;
    mpz_fdiv_r_ui(r.get_mpz_t(), r.get_mpz_t(), q);
    const long double angle = 2.0L * std::numbers::pi_v<long double> * r.get_ui() / q;
    total += std::complex<long double>(std::cos(angle), std::sin(angle));
    out.push_back(total);
  }
  return out;
}

/// Digit caps for positions 2..depth from the definition of E(f,a).
inline std::vector<std::uint64_t> caps(const std::function<unsigned long(unsigned long)>& f,
                                       const std::function<mpz_class(unsigned long)>& a, std::size_t depth) {
  std::vector<std::uint64_t> out;
  for (std::size_t n = 2; n <= depth; ++n) out.push_back(n - 1);
  for (unsigned long i = 1;; ++i) {
    const unsigned long position = f(i) + 1;
    if (position > depth) break;
    mpz_class cap = mpz_class(position) / a(i);
    out[position - 2] = std::min<std::uint64_t>(out[position - 2], cap.get_ui());
  }
  return out;
}

/// Calls visit(digits) for every admissible digit tuple at positions 2..depth.
inline void each_admissible(const std::vector<std::uint64_t>& cap, std::size_t depth,
                            const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> digits(depth - 1, 0);
  for (;;) {
    visit(digits);
    std::size_t k = digits.size();
    while (k > 0) {
      --k;
      if (digits[k] < cap[k]) {
        ++digits[k];
        std::fill(digits.begin() + static_cast<std::ptrdiff_t>(k) + 1, digits.end(), 0);
        break;
      }
      if (k == 0) return;
    }
    if (digits.empty()) return;
  }
}

inline mpz_class brute_count(const std::vector<std::uint64_t>& cap, std::size_t depth) {
  mpz_class count = 0;
  each_admissible(cap, depth, [&](const std::vector<std::uint32_t>&) { ++count; });
  return count;
}

/// Measure of [lo, hi) for lo, hi on the 1/depth! grid, by summing cylinders.
inline mpq_class grid_measure(const std::vector<std::uint64_t>& cap, std::size_t depth, const mpq_class& lo,
                              const mpq_class& hi) {
  mpz_class cylinders = 1;
  for (std::size_t k = 0; k + 2 <= depth; ++k) cylinders *= cap[k] + 1;
  mpq_class weight(1, cylinders);
  weight.canonicalize();
  mpq_class out = 0;
  each_admissible(cap, depth, [&](const std::vector<std::uint32_t>& digits) {
    const mpq_class x = value_of(digits);
    if (x >= lo && x < hi) out += weight;
  });
  return out;
}

/// Smallest K, then smallest q, with a_n = a_{n+q} on the whole prefix for n >= K.
inline std::optional<std::pair<std::size_t, std::size_t>> ultimate_period(const std::vector<std::uint32_t>& a,
                                                                          std::size_t max_pre,
                                                                          std::size_t max_q) {
  for (std::size_t k = 0; k <= max_pre; ++k) {
    for (std::size_t q = 1; q <= max_q; ++q) {
      bool ok = true;
      for (std::size_t n = k; n + q < a.size() && ok; ++n) ok = a[n] == a[n + q];
      if (ok) return std::make_pair(k, q);
    }
  }
  return std::nullopt;
}

}  // namespace besum::oracle
