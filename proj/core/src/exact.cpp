#include "besum/exact.hpp"

#include <cmath>
#include <string>

#include "besum/errors.hpp"

namespace besum {

ExactFraction make_fraction(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("fraction with zero denominator");
  ExactFraction out(num, den);
  out.canonicalize();
  return out;
}

ExactFraction parse_fraction(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (start == t.size()) return false;
    for (std::size_t k = start; k < t.size(); ++k) {
      if (t[k] < '0' || t[k] > '9') return false;
    }
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("not a rational number: '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  BigInt n(num), d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  return make_fraction(n, d);
}

std::string to_string(const ExactFraction& x) { return x.get_str(); }
std::string to_string(const BigInt& x) { return x.get_str(); }

ExactFraction frac_part(const ExactFraction& x) {
  BigInt floor_value;
  mpz_fdiv_q(floor_value.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  ExactFraction out = x - ExactFraction(floor_value);
  return out;
}

double to_double(const ExactFraction& x) { return x.get_d(); }

BigInt factorial(std::uint64_t n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

double log_of(const BigInt& x) {
  if (x <= 0) throw DomainError("log of non-positive integer");
  signed long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

const ExactFraction& e_upper_bound() {
  static const ExactFraction value = make_fraction(BigInt("271828182846"), BigInt("100000000000"));
  return value;
}

}  // namespace besum
