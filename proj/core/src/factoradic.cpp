#include "besum/factoradic.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "besum/errors.hpp"

namespace besum {

FactoradicReal::FactoradicReal(std::vector<std::uint32_t> digits, TailPolicy tail)
    : digits_(std::move(digits)), tail_(tail) {
  if (digits_.empty()) throw DomainError("factoradic depth must be at least 2");
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    const std::size_t position = k + 2;
    if (digits_[k] > position - 1) {
      throw DomainError("factoradic digit s_" + std::to_string(position) + " = " +
                        std::to_string(digits_[k]) + " exceeds " + std::to_string(position - 1));
    }
  }
}

std::uint32_t FactoradicReal::digit(std::size_t n) const {
  if (n < 2) return 0;
  if (n <= depth()) return digits_[n - 2];
  if (tail_ == TailPolicy::kZero) return 0;
  throw InsufficientDepthError("digit s_" + std::to_string(n) + " is beyond the known prefix", n);
}

FactoradicReal encode(const ExactFraction& x, std::size_t depth) {
  if (x < 0 || x >= 1) throw DomainError("encode expects 0 <= x < 1, got " + to_string(x));
  if (depth < 2) throw DomainError("encode depth must be at least 2");

  // Work on the integer remainder r = x*q with x = p/q, so each step is
  // r <- n r; s_n = r div q; r <- r mod q.
  const BigInt& q = x.get_den();
  BigInt r = x.get_num();
  BigInt s;
  std::vector<std::uint32_t> digits;
  digits.reserve(depth - 1);
  for (std::size_t n = 2; n <= depth; ++n) {
    if (r == 0) {
      digits.push_back(0);
      continue;
    }
    r *= static_cast<unsigned long>(n);
    mpz_fdiv_qr(s.get_mpz_t(), r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
    digits.push_back(static_cast<std::uint32_t>(s.get_ui()));
  }
  return FactoradicReal(std::move(digits), r == 0 ? TailPolicy::kZero : TailPolicy::kUnknown);
}

Interval decode(const FactoradicReal& f) {
  // sum_{n <= D} s_n/n! = (sum_n s_n * D!/n!) / D!, accumulated from the top.
  const std::size_t depth = f.depth();
  BigInt numerator = 0;
  BigInt scale = 1;  // D!/n!
  for (std::size_t n = depth; n >= 2; --n) {
    numerator += scale * f.digit(n);
    scale *= static_cast<unsigned long>(n);
  }
  ExactFraction lower = make_fraction(numerator, scale);
  if (f.tail() == TailPolicy::kZero) return {lower, lower};
  return {lower, lower + ExactFraction(1, scale)};
}

FracEstimate frac_factorial(std::uint64_t m, const FactoradicReal& f) {
  if (m == 0) m = 1;  // 0! = 1!
  const std::size_t depth = f.depth();
  if (f.tail() == TailPolicy::kUnknown && m >= depth) {
    throw InsufficientDepthError("{" + std::to_string(m) + "! alpha} is undetermined at depth " +
                                     std::to_string(depth),
                                 m + 1);
  }
  if (m >= depth) return {ExactFraction(0), ExactFraction(0)};

  // value = (sum_{i=m+1}^{D} s_i * D!/i!) / (D!/m!)
  BigInt numerator = 0;
  BigInt scale = 1;
  for (std::size_t i = depth; i > m; --i) {
    numerator += scale * f.digit(i);
    scale *= static_cast<unsigned long>(i);
  }
  ExactFraction value = make_fraction(numerator, scale);
  ExactFraction error = f.tail() == TailPolicy::kZero ? ExactFraction(0) : ExactFraction(1, scale);
  return {value, error};
}

Rationality is_rational_by_digits(const FactoradicReal& f) {
  return f.tail() == TailPolicy::kZero ? Rationality::kRational : Rationality::kUnknownAtDepth;
}

namespace {

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw ParseError(std::string("digit file: missing ") + what);
}

std::string value_after(const std::string& line, const std::string& key) {
  if (line.rfind(key + "=", 0) != 0) throw ParseError("digit file: expected '" + key + "=...'");
  return line.substr(key.size() + 1);
}

}  // namespace

FactoradicReal read_digit_file(std::istream& in) {
  if (expect_line(in, "header") != "factoradic v1") {
    throw ParseError("digit file: header must be 'factoradic v1'");
  }
  std::size_t depth = 0;
  try {
    std::size_t used = 0;
    std::string text = value_after(expect_line(in, "depth line"), "depth");
    depth = std::stoull(text, &used);
    if (used != text.size()) throw ParseError("digit file: bad depth");
  } catch (const std::logic_error&) {
    throw ParseError("digit file: bad depth");
  }
  if (depth < 2) throw ParseError("digit file: depth must be at least 2");
  std::string tail_text = value_after(expect_line(in, "tail line"), "tail");
  TailPolicy tail;
  if (tail_text == "ZERO") {
    tail = TailPolicy::kZero;
  } else if (tail_text == "UNKNOWN") {
    tail = TailPolicy::kUnknown;
  } else {
    throw ParseError("digit file: tail must be ZERO or UNKNOWN");
  }

  std::vector<std::uint32_t> digits;
  digits.reserve(depth - 1);
  std::string token;
  while (in >> token) {
    const std::size_t position = digits.size() + 2;
    if (position > depth) throw ParseError("digit file: more digits than depth " + std::to_string(depth));
    if (token.find_first_not_of("0123456789") != std::string::npos || token.size() > 10) {
      throw ParseError("digit file: bad digit '" + token + "' at position " + std::to_string(position));
    }
    unsigned long long value = std::stoull(token);
    if (value > position - 1) {
      throw ParseError("digit file: digit " + token + " out of range at position " +
                       std::to_string(position));
    }
    digits.push_back(static_cast<std::uint32_t>(value));
  }
  if (digits.size() != depth - 1) {
    throw ParseError("digit file: expected " + std::to_string(depth - 1) + " digits, got " +
                     std::to_string(digits.size()));
  }
  return FactoradicReal(std::move(digits), tail);
}

FactoradicReal read_digit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open digit file '" + path + "'");
  return read_digit_file(in);
}

void write_digit_file(std::ostream& out, const FactoradicReal& f) {
  out << "factoradic v1\n"
      << "depth=" << f.depth() << "\n"
      << "tail=" << (f.tail() == TailPolicy::kZero ? "ZERO" : "UNKNOWN") << "\n";
  bool first = true;
  for (auto d : f.digits()) {
    if (!first) out << ' ';
    out << d;
    first = false;
  }
  out << "\n";
}

}  // namespace besum
