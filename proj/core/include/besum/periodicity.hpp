#pragma once

// Finitely-valued coefficient sequences a_0 = 0, a_1, ..., a_L, their power
// series u(z) = sum a_n z^n on disk sectors, and ultimate-periodicity tests.
//
// If a is ultimately periodic, a_n = a_{n+q} for n >= K, then
//
//   u(z) = sum_{n<K} a_n z^n + z^K B(z) / (1 - z^q),   B(z) = sum_{j<q} a_{K+j} z^j,
//
// and u stays bounded at every nontrivial q-th root of unity only when
// 1 + z + ... + z^{q-1} divides B, i.e. when the block is constant.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besum/exact.hpp"
#include "besum/expsum.hpp"

namespace besum {

struct GaussianRational {
  ExactFraction re;
  ExactFraction im;

  bool operator==(const GaussianRational&) const = default;
};

struct AlphabetEntry {
  Complex value;
  std::optional<GaussianRational> exact;
  std::string text;

  static AlphabetEntry from_exact(GaussianRational z);
  /// "re" or "re:im"; parts are integers, p/q (exact) or decimals (float only).
  static AlphabetEntry parse(const std::string& text);
};

class CoefficientSequence {
 public:
  /// `symbols[n]` indexes `alphabet`; alphabet values must be distinct and
  /// symbols[0] must denote 0.
  CoefficientSequence(std::vector<AlphabetEntry> alphabet, std::vector<std::uint32_t> symbols);

  /// Alphabet {0, 1}; `bits[0]` must be 0.
  static CoefficientSequence binary(std::span<const std::uint8_t> bits);

  /// Indicator of a set of positive integers on 0..last_index.
  static CoefficientSequence indicator(std::span<const std::uint64_t> elements, std::size_t last_index);

  std::size_t size() const noexcept { return symbols_.size(); }
  std::span<const AlphabetEntry> alphabet() const noexcept { return alphabet_; }
  std::span<const std::uint32_t> symbols() const noexcept { return symbols_; }
  std::uint32_t symbol(std::size_t n) const { return symbols_.at(n); }
  Complex value(std::size_t n) const { return alphabet_[symbols_.at(n)].value; }

 private:
  std::vector<AlphabetEntry> alphabet_;
  std::vector<std::uint32_t> symbols_;
};

/// theta1 <= arg z / 2pi <= theta2, sampled at `theta_steps` evenly spaced
/// angles (endpoints included) and the listed radii.
struct SectorSpec {
  double theta1 = 0.0;
  double theta2 = 1.0;
  std::vector<double> radii;
  std::size_t theta_steps = 16;
};

struct SectorGrid {
  std::vector<double> radii;
  std::vector<double> thetas;
  /// values[r * thetas.size() + t].
  std::vector<Complex> values;
  double max_modulus = 0.0;
  double argmax_radius = 0.0;
  double argmax_theta = 0.0;
};

/// sum_{n <= A} a_n r^n e(n theta) over the grid.
SectorGrid sector_eval(const CoefficientSequence& c, const SectorSpec& sector, std::size_t a_max);

struct AbelCheck {
  double lhs;  ///< |sum_{n<=A} a_n r^n e(n alpha)|
  double rhs;  ///< prefix_sup: max_{M<=A} |sum_{n<=M} a_n e(n alpha)|
  bool holds;
};

AbelCheck abel_bound_check(const CoefficientSequence& c, const Angle& alpha, double r, std::size_t a_max);

struct UltimatePeriod {
  std::size_t preperiod;  ///< K
  std::size_t period;     ///< q

  bool operator==(const UltimatePeriod&) const = default;
};

/// Smallest K, then smallest q, with a_n = a_{n+q} for K <= n <= L-q.
/// Requires size() >= max_preperiod + 2 * max_period.
std::optional<UltimatePeriod> detect_ultimate_period(const CoefficientSequence& c, std::size_t max_preperiod,
                                                     std::size_t max_period);

/// True iff the block a_K..a_{K+q-1} is divisible by 1 + z + ... + z^{q-1}.
/// Exact remainder when every block value is a Gaussian rational, otherwise
/// evaluation at the nontrivial q-th roots of unity with tolerance 1e-9.
/// Throws InvalidPeriodError when (K, q) is not a period of the prefix.
bool period_collapse_test(const CoefficientSequence& c, std::size_t preperiod, std::size_t period);

// Coefficient streams:
//   coeffs v1
//   alphabet <v0> <v1> ...
//   <index>[*<count>] ...
CoefficientSequence read_coeff_stream(std::istream& in);
CoefficientSequence read_coeff_stream(const std::string& path);
void write_coeff_stream(std::ostream& out, const CoefficientSequence& c);

}  // namespace besum
