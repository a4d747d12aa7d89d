#include "besum/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "besum/errors.hpp"

namespace besum {

namespace {

GaussianRational operator-(const GaussianRational& x, const GaussianRational& y) {
  return {x.re - y.re, x.im - y.im};
}

bool is_zero(const GaussianRational& z) { return z.re == 0 && z.im == 0; }

std::string part_text(const ExactFraction& x) { return to_string(x); }

/// Parses one real part; returns the exact value when the text is an
/// integer or p/q.
std::pair<double, std::optional<ExactFraction>> parse_part(const std::string& text) {
  try {
    ExactFraction exact = parse_fraction(text);
    return {to_double(exact), exact};
  } catch (const ParseError&) {
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::logic_error&) {
    throw ParseError("alphabet: bad value '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) throw ParseError("alphabet: bad value '" + text + "'");
  return {value, std::nullopt};
}

}  // namespace

AlphabetEntry AlphabetEntry::from_exact(GaussianRational z) {
  Complex value{to_double(z.re), to_double(z.im)};
  std::string text = part_text(z.re);
  if (z.im != 0) text += ":" + part_text(z.im);
  return {value, std::move(z), std::move(text)};
}

AlphabetEntry AlphabetEntry::parse(const std::string& text) {
  const auto colon = text.find(':');
  auto [re, re_exact] = parse_part(text.substr(0, colon));
  double im = 0.0;
  std::optional<ExactFraction> im_exact = ExactFraction(0);
  if (colon != std::string::npos) std::tie(im, im_exact) = parse_part(text.substr(colon + 1));
  AlphabetEntry entry{{re, im}, std::nullopt, text};
  if (re_exact && im_exact) entry.exact = GaussianRational{*re_exact, *im_exact};
  return entry;
}

CoefficientSequence::CoefficientSequence(std::vector<AlphabetEntry> alphabet, std::vector<std::uint32_t> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
  if (alphabet_.empty()) throw DomainError("coefficient alphabet is empty");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (alphabet_[i].value == alphabet_[j].value) throw DomainError("coefficient alphabet has duplicate values");
    }
  }
  for (auto s : symbols_) {
    if (s >= alphabet_.size()) throw DomainError("coefficient symbol outside the alphabet");
  }
  if (symbols_.empty() || alphabet_[symbols_[0]].value != Complex(0.0, 0.0)) {
    throw DomainError("coefficient sequences start with a_0 = 0");
  }
}

CoefficientSequence CoefficientSequence::binary(std::span<const std::uint8_t> bits) {
  std::vector<AlphabetEntry> alphabet{AlphabetEntry::from_exact({0, 0}), AlphabetEntry::from_exact({1, 0})};
  std::vector<std::uint32_t> symbols;
  symbols.reserve(bits.size());
  for (auto b : bits) {
    if (b > 1) throw DomainError("binary coefficients must be 0 or 1");
    symbols.push_back(b);
  }
  return CoefficientSequence(std::move(alphabet), std::move(symbols));
}

CoefficientSequence CoefficientSequence::indicator(std::span<const std::uint64_t> elements,
                                                   std::size_t last_index) {
  std::vector<std::uint8_t> bits(last_index + 1, 0);
  for (auto e : elements) {
    if (e == 0) throw DomainError("indicator sets live in {1, 2, ...}");
    if (e <= last_index) bits[e] = 1;
  }
  return binary(bits);
}

SectorGrid sector_eval(const CoefficientSequence& c, const SectorSpec& sector, std::size_t a_max) {
  if (!(sector.theta1 >= 0.0 && sector.theta1 < sector.theta2 && sector.theta2 <= 1.0)) {
    throw DomainError("sector needs 0 <= theta1 < theta2 <= 1");
  }
  if (sector.theta_steps < 1) throw DomainError("sector needs at least one angle");
  for (double r : sector.radii) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("sector radii must lie in [0,1)");
  }
  if (a_max >= c.size()) throw DomainError("sector_eval needs A < prefix length");

  SectorGrid grid;
  grid.radii = sector.radii;
  if (sector.theta_steps == 1) {
    grid.thetas.push_back(0.5 * (sector.theta1 + sector.theta2));
  } else {
    for (std::size_t t = 0; t < sector.theta_steps; ++t) {
      grid.thetas.push_back(sector.theta1 + (sector.theta2 - sector.theta1) * static_cast<double>(t) /
                                                static_cast<double>(sector.theta_steps - 1));
    }
  }
  grid.values.reserve(grid.radii.size() * grid.thetas.size());
  for (double r : grid.radii) {
    for (double theta : grid.thetas) {
      const Complex z = r * unit_phase(theta);
      Complex power = 1.0;
      Complex total = 0.0;
      for (std::size_t n = 1; n <= a_max; ++n) {
        power *= z;
        total += c.value(n) * power;
      }
      grid.values.push_back(total);
      if (std::abs(total) > grid.max_modulus) {
        grid.max_modulus = std::abs(total);
        grid.argmax_radius = r;
        grid.argmax_theta = theta;
      }
    }
  }
  return grid;
}

AbelCheck abel_bound_check(const CoefficientSequence& c, const Angle& alpha, double r, std::size_t a_max) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("abel_bound_check needs 0 <= r < 1");
  if (a_max >= c.size()) throw DomainError("abel_bound_check needs A < prefix length");
  const auto phases = multiples_mod_one(alpha, a_max);
  SumTrace plain;
  Complex weighted = 0.0;
  double power = 1.0;
  for (std::size_t n = 1; n <= a_max; ++n) {
    power *= r;
    const Complex term = c.value(n) * unit_phase(phases[n]);
    plain.push(term);
    weighted += power * term;
  }
  const double lhs = std::abs(weighted);
  const double rhs = plain.sup_modulus();
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

std::optional<UltimatePeriod> detect_ultimate_period(const CoefficientSequence& c, std::size_t max_preperiod,
                                                     std::size_t max_period) {
  if (max_period < 1) throw DomainError("max_period must be at least 1");
  const std::size_t needed = max_preperiod + 2 * max_period;
  if (c.size() < needed) {
    throw InsufficientDepthError("coefficient prefix of length " + std::to_string(c.size()) +
                                     " is too short for the search window",
                                 needed);
  }
  const auto a = c.symbols();
  const std::size_t last = a.size() - 1;
  std::optional<UltimatePeriod> best;
  for (std::size_t q = 1; q <= max_period; ++q) {
    // K_q is one past the last mismatch a_n != a_{n+q}.
    std::size_t k = 0;
    for (std::size_t n = last - q + 1; n-- > 0;) {
      if (a[n] != a[n + q]) {
        k = n + 1;
        break;
      }
    }
    if (k > max_preperiod) continue;
    if (!best || k < best->preperiod) best = UltimatePeriod{k, q};
  }
  return best;
}

bool period_collapse_test(const CoefficientSequence& c, std::size_t preperiod, std::size_t period) {
  if (period < 1) throw InvalidPeriodError("period must be at least 1");
  const auto a = c.symbols();
  if (preperiod + period > a.size()) throw InvalidPeriodError("period block extends past the prefix");
  for (std::size_t n = preperiod; n + period < a.size(); ++n) {
    if (a[n] != a[n + period]) {
      throw InvalidPeriodError("a_" + std::to_string(n) + " != a_" + std::to_string(n + period) +
                               ": (K, q) = (" + std::to_string(preperiod) + ", " + std::to_string(period) +
                               ") is not a period of the prefix");
    }
  }

  const auto alphabet = c.alphabet();
  const bool exact = std::all_of(a.begin() + static_cast<std::ptrdiff_t>(preperiod),
                                 a.begin() + static_cast<std::ptrdiff_t>(preperiod + period),
                                 [&](std::uint32_t s) { return alphabet[s].exact.has_value(); });
  if (exact) {
    // Remainder of B(z) by the monic 1 + z + ... + z^{q-1}.
    std::vector<GaussianRational> remainder;
    for (std::size_t j = 0; j < period; ++j) remainder.push_back(*alphabet[a[preperiod + j]].exact);
    const std::size_t divisor_degree = period - 1;
    for (std::size_t top = remainder.size(); top-- > divisor_degree;) {
      const GaussianRational lead = remainder[top];
      if (is_zero(lead)) continue;
      for (std::size_t k = 0; k <= divisor_degree; ++k) {
        auto& slot = remainder[top - divisor_degree + k];
        slot = slot - lead;
      }
    }
    return std::all_of(remainder.begin(), remainder.end(), is_zero);
  }

  double scale = 1.0;
  for (std::size_t j = 0; j < period; ++j) scale += std::abs(c.value(preperiod + j));
  for (std::size_t k = 1; k < period; ++k) {
    Complex total = 0.0;
    for (std::size_t j = 0; j < period; ++j) {
      const double turns = static_cast<double>((k * j) % period) / static_cast<double>(period);
      total += c.value(preperiod + j) * unit_phase(turns);
    }
    if (std::abs(total) > 1e-9 * scale) return false;
  }
  return true;
}

CoefficientSequence read_coeff_stream(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return;
    }
    throw ParseError(std::string("coefficient stream: missing ") + what);
  };
  next_line("header");
  if (line != "coeffs v1") throw ParseError("coefficient stream: header must be 'coeffs v1'");
  next_line("alphabet line");
  std::istringstream alphabet_line(line);
  std::string word;
  alphabet_line >> word;
  if (word != "alphabet") throw ParseError("coefficient stream: expected 'alphabet ...'");
  std::vector<AlphabetEntry> alphabet;
  while (alphabet_line >> word) alphabet.push_back(AlphabetEntry::parse(word));
  if (alphabet.empty()) throw ParseError("coefficient stream: empty alphabet");

  std::vector<std::uint32_t> symbols;
  std::string token;
  while (in >> token) {
    const auto star = token.find('*');
    const std::string index_text = token.substr(0, star);
    const std::string count_text = star == std::string::npos ? "1" : token.substr(star + 1);
    auto as_number = [&](const std::string& t) {
      if (t.empty() || t.size() > 12 || t.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("coefficient stream: bad token '" + token + "'");
      }
      return std::stoull(t);
    };
    const auto index = as_number(index_text);
    const auto count = as_number(count_text);
    if (index >= alphabet.size()) throw ParseError("coefficient stream: symbol " + index_text + " not in alphabet");
    symbols.insert(symbols.end(), count, static_cast<std::uint32_t>(index));
  }
  try {
    return CoefficientSequence(std::move(alphabet), std::move(symbols));
  } catch (const DomainError& e) {
    throw ParseError(std::string("coefficient stream: ") + e.what());
  }
}

CoefficientSequence read_coeff_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficient stream '" + path + "'");
  return read_coeff_stream(in);
}

void write_coeff_stream(std::ostream& out, const CoefficientSequence& c) {
  out << "coeffs v1\nalphabet";
  for (const auto& entry : c.alphabet()) out << ' ' << entry.text;
  out << '\n';
  const auto a = c.symbols();
  std::size_t column = 0;
  for (std::size_t n = 0; n < a.size();) {
    std::size_t run = 1;
    while (n + run < a.size() && a[n + run] == a[n]) ++run;
    out << (column ? " " : "") << a[n];
    if (run > 1) out << '*' << run;
    n += run;
    if (++column == 16) {
      out << '\n';
      column = 0;
    }
  }
  out << '\n';
}

}  // namespace besum
