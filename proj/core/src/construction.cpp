#include "besum/construction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "besum/errors.hpp"

namespace besum {

namespace {

std::uint64_t saturating_mul(std::uint64_t x, std::uint64_t y) {
  std::uint64_t out;
  if (__builtin_mul_overflow(x, y, &out)) return kSaturated;
  return out;
}

BigInt to_big(std::uint64_t x) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
  return out;
}

std::map<std::string, GrowthFunction, std::less<>>& growth_registry() {
  static std::map<std::string, GrowthFunction, std::less<>> registry = [] {
    std::map<std::string, GrowthFunction, std::less<>> r;
    r.emplace("id", GrowthFunction("id", [](std::uint64_t n) { return n; }));
    r.emplace("n2", GrowthFunction("n2", [](std::uint64_t n) { return saturating_mul(n, n); }));
    r.emplace("n3", GrowthFunction("n3", [](std::uint64_t n) {
                return saturating_mul(saturating_mul(n, n), n);
              }));
    r.emplace("pow2", GrowthFunction("pow2", [](std::uint64_t n) {
                return n < 64 ? std::uint64_t{1} << n : kSaturated;
              }));
    return r;
  }();
  return registry;
}

std::map<std::string, WeightSequence, std::less<>>& weight_registry() {
  static std::map<std::string, WeightSequence, std::less<>> registry = [] {
    std::map<std::string, WeightSequence, std::less<>> r;
    // pi^2/6 < 1.645, zeta(3) < 1.203.
    r.emplace("n2", WeightSequence("n2", [](std::uint64_t n) {
                BigInt b = to_big(n);
                return BigInt(b * b);
              }, 1.645));
    r.emplace("n3", WeightSequence("n3", [](std::uint64_t n) {
                BigInt b = to_big(n);
                return BigInt(b * b * b);
              }, 1.203));
    r.emplace("pow2", WeightSequence("pow2", [](std::uint64_t n) {
                BigInt out;
                mpz_ui_pow_ui(out.get_mpz_t(), 2, n);
                return out;
              }, 1.0));
    // a_n = n (floor(log2 n) + 1)^2; each dyadic block [2^k, 2^{k+1}) contributes
    // at most 1/(k+1)^2.
    r.emplace("nlog2", WeightSequence("nlog2", [](std::uint64_t n) {
                const std::uint64_t bits = 64 - static_cast<std::uint64_t>(__builtin_clzll(n));
                BigInt b = to_big(n);
                return BigInt(b * bits * bits);
              }, 1.645));
    return r;
  }();
  return registry;
}

template <typename Map>
std::vector<std::string> keys_of(const Map& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

template <typename Map>
std::string known_list(const Map& m) {
  std::string out;
  for (const auto& k : keys_of(m)) out += (out.empty() ? "" : ", ") + k;
  return out;
}

}  // namespace

void GrowthFunction::check(std::uint64_t n_max) const {
  std::uint64_t previous = (*this)(1);
  if (previous < 1) throw DomainError("growth function '" + name_ + "' must satisfy f(1) >= 1");
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const std::uint64_t value = (*this)(n);
    if (previous == kSaturated && value == kSaturated) break;
    if (value <= previous) {
      throw DomainError("growth function '" + name_ + "' is not strictly increasing at n = " +
                        std::to_string(n));
    }
    if (value < n) {
      throw DomainError("growth function '" + name_ + "' violates f(n) >= n at n = " + std::to_string(n));
    }
    previous = value;
  }
}

ExactFraction WeightSequence::partial_sum_reciprocals(std::uint64_t n) const {
  ExactFraction total = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    BigInt a = (*this)(k);
    if (a <= 0) throw DomainError("weight sequence '" + name_ + "' has a non-positive term");
    total += make_fraction(1, a);
  }
  return total;
}

GrowthFunction growth_function(std::string_view name) {
  auto& registry = growth_registry();
  auto it = registry.find(name);
  if (it == registry.end()) {
    throw DomainError("unknown growth function '" + std::string(name) + "' (known: " +
                      known_list(registry) + ")");
  }
  return it->second;
}

WeightSequence weight_sequence(std::string_view name) {
  auto& registry = weight_registry();
  auto it = registry.find(name);
  if (it == registry.end()) {
    throw DomainError("unknown weight sequence '" + std::string(name) + "' (known: " +
                      known_list(registry) + ")");
  }
  return it->second;
}

std::vector<std::string> growth_function_names() { return keys_of(growth_registry()); }
std::vector<std::string> weight_sequence_names() { return keys_of(weight_registry()); }

void register_growth_function(GrowthFunction f) {
  const std::string name = f.name();
  growth_registry().insert_or_assign(name, std::move(f));
}

void register_weight_sequence(WeightSequence a) {
  const std::string name = a.name();
  weight_registry().insert_or_assign(name, std::move(a));
}

DigitConstraintSet::DigitConstraintSet(GrowthFunction f, WeightSequence a)
    : f_(std::move(f)), a_(std::move(a)) {}

BigInt DigitConstraintSet::cap(std::uint64_t i) const {
  const std::uint64_t fi = f_(i);
  if (fi == kSaturated) throw DomainError("f(" + std::to_string(i) + ") overflows 64 bits");
  BigInt a = a_(i);
  if (a <= 0) throw DomainError("weight a_" + std::to_string(i) + " must be positive");
  return BigInt(to_big(fi + 1) / a);
}

std::optional<std::uint64_t> DigitConstraintSet::constraint_index(std::uint64_t position) const {
  if (position < 2) return std::nullopt;
  // f(i) >= i, so a match has i <= position - 1.
  const std::uint64_t target = position - 1;
  std::uint64_t lo = 1;
  std::uint64_t hi = target;
  while (lo <= hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const std::uint64_t value = f_(mid);
    if (value == target) return mid;
    if (value < target) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return std::nullopt;
}

std::uint64_t DigitConstraintSet::max_digit(std::uint64_t position) const {
  if (position < 2) return 0;
  const std::uint64_t full = position - 1;
  auto i = constraint_index(position);
  if (!i) return full;
  BigInt c = cap(*i);
  return c < to_big(full) ? c.get_ui() : full;
}

std::vector<std::uint64_t> DigitConstraintSet::max_digits(std::size_t depth) const {
  std::vector<std::uint64_t> out;
  if (depth < 2) return out;
  out.reserve(depth - 1);
  for (std::uint64_t m = 2; m <= depth; ++m) out.push_back(m - 1);
  for (std::uint64_t i = 1;; ++i) {
    const std::uint64_t fi = f_(i);
    if (fi == kSaturated || fi + 1 > depth) break;
    const std::uint64_t position = fi + 1;
    BigInt c = cap(i);
    if (c < to_big(out[position - 2])) out[position - 2] = c.get_ui();
  }
  return out;
}

Membership membership(const DigitConstraintSet& set, const FactoradicReal& alpha) {
  const auto caps = set.max_digits(alpha.depth());
  const auto digits = alpha.digits();
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] > caps[k]) return Membership::kOut;
  }
  return alpha.tail() == TailPolicy::kZero ? Membership::kIn : Membership::kUnknownAtDepth;
}

FactoradicReal sample_E(const DigitConstraintSet& set, std::size_t depth, std::uint64_t seed) {
  if (depth < 2) throw DomainError("sample_E depth must be at least 2");
  const auto caps = set.max_digits(depth);
  if (std::all_of(caps.begin(), caps.end(), [](std::uint64_t c) { return c == 0; })) {
    throw DomainError("E(f,a) has no nonzero point at depth " + std::to_string(depth));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> digits(caps.size());
  for (;;) {
    bool nonzero = false;
    for (std::size_t k = 0; k < caps.size(); ++k) {
      std::uniform_int_distribution<std::uint64_t> draw(0, caps[k]);
      digits[k] = static_cast<std::uint32_t>(draw(rng));
      nonzero = nonzero || digits[k] != 0;
    }
    if (nonzero) return FactoradicReal(digits, TailPolicy::kZero);
  }
}

std::vector<BigInt> af_elements(const GrowthFunction& f, std::uint64_t n_max, std::uint64_t bit_budget) {
  if (n_max < 1) throw DomainError("af_elements expects n_max >= 1");
  const std::uint64_t top = f(n_max);
  if (top == kSaturated) throw ResourceError("f(" + std::to_string(n_max) + ") overflows 64 bits");
  const double bits = std::lgamma(static_cast<double>(top) + 1.0) / std::numbers::ln2;
  if (bits > static_cast<double>(bit_budget)) {
    throw ResourceError(std::to_string(top) + "! needs about " + std::to_string(static_cast<std::uint64_t>(bits)) +
                        " bits, over the budget of " + std::to_string(bit_budget));
  }
  std::vector<BigInt> out;
  out.reserve(n_max);
  BigInt running = 1;  // k!
  std::uint64_t k = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const std::uint64_t fn = f(n);
    for (; k < fn; ++k) running *= static_cast<unsigned long>(k + 1);
    out.push_back(running + to_big(n));
  }
  return out;
}

std::uint64_t af_index_count(const GrowthFunction& f, const BigInt& threshold) {
  std::uint64_t count = 0;
  BigInt running = 1;
  std::uint64_t k = 1;
  for (std::uint64_t n = 1;; ++n) {
    const std::uint64_t fn = f(n);
    if (fn == kSaturated) break;
    for (; k < fn && running <= threshold; ++k) running *= static_cast<unsigned long>(k + 1);
    if (k < fn || running + to_big(n) > threshold) break;
    count = n;
  }
  return count;
}

namespace {

/// f(n)! mod q for increasing n; zero once q | f(n)!.
class FactorialResidues {
 public:
  FactorialResidues(const GrowthFunction& f, std::uint64_t q) : f_(f), q_(q) {}

  std::uint64_t next(std::uint64_t n) {
    if (residue_ == 0) return 0;
    const std::uint64_t fn = f_(n);
    if (fn >= q_) {
      residue_ = 0;
      return 0;
    }
    for (; k_ < fn && residue_ != 0; ++k_) residue_ = residue_ * ((k_ + 1) % q_) % q_;
    return residue_;
  }

 private:
  const GrowthFunction& f_;
  std::uint64_t q_;
  std::uint64_t k_ = 1;
  std::uint64_t residue_ = 1;
};

void record(AfSum& out, std::span<const std::uint64_t> checkpoints, std::size_t& next_checkpoint,
            std::uint64_t n) {
  while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= n) {
    if (checkpoints[next_checkpoint] == n) {
      out.snapshots.push_back({n, out.trace.partial_sum(), out.trace.sup_modulus(), out.trace.sup_at()});
    }
    ++next_checkpoint;
  }
}

}  // namespace

AfSum af_sum_rational(const GrowthFunction& f, std::uint64_t p, std::uint64_t q, std::uint64_t n,
                      std::span<const std::uint64_t> checkpoints) {
  if (q < 2) throw DomainError("af_sum_rational expects q >= 2");
  if (q >= (std::uint64_t{1} << 32)) throw DomainError("af_sum_rational expects q < 2^32");
  if (n < 1) throw DomainError("af_sum_rational expects N >= 1");
  const std::uint64_t pm = p % q;
  const double inv_q = 1.0 / static_cast<double>(q);
  FactorialResidues residues(f, q);
  AfSum out;
  std::size_t next_checkpoint = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const std::uint64_t element_mod_q = (k % q + residues.next(k)) % q;
    const std::uint64_t phase = element_mod_q * pm % q;
    out.trace.push(static_cast<double>(phase) * inv_q);
    record(out, checkpoints, next_checkpoint, k);
  }
  return out;
}

double rational_sum_bound(const GrowthFunction& f, std::uint64_t p, std::uint64_t q) {
  if (q < 2) throw DomainError("rational_sum_bound expects q >= 2");
  const double head = std::abs(af_sum_rational(f, p, q, q - 1).sum());
  const double alpha = static_cast<double>(p % q) / static_cast<double>(q);
  return head + 2.0 * dirichlet_bound(alpha) + 1.0;
}

AfSum af_sum_factoradic(const GrowthFunction& f, const FactoradicReal& alpha, std::uint64_t n,
                        std::span<const std::uint64_t> checkpoints) {
  if (n < 1) throw DomainError("af_sum_factoradic expects N >= 1");
  const std::size_t depth = alpha.depth();
  const bool exact = alpha.tail() == TailPolicy::kZero;
  const std::uint64_t f_top = f(n);
  if (!exact && (f_top == kSaturated || f_top + 2 > depth)) {
    const std::uint64_t required = f_top == kSaturated ? kSaturated : f_top + 2;
    throw InsufficientDepthError("alpha has depth " + std::to_string(depth) + " but f(" + std::to_string(n) +
                                     ") = " + std::to_string(f_top),
                                 required);
  }

  // decode(alpha).lower = numerator / depth! without reduction.
  BigInt numerator = 0;
  BigInt depth_factorial = 1;
  for (std::size_t m = depth; m >= 2; --m) {
    numerator += depth_factorial * alpha.digit(m);
    depth_factorial *= static_cast<unsigned long>(m);
  }
  const double inv_depth_factorial = to_double(make_fraction(1, depth_factorial));

  AfSum out;
  std::size_t next_checkpoint = 0;
  BigInt shifted;
  for (std::uint64_t k = 1; k <= n; ++k) {
    // {k alpha} from the lower end of alpha's interval.
    shifted = numerator * static_cast<unsigned long>(k);
    mpz_fdiv_r(shifted.get_mpz_t(), shifted.get_mpz_t(), depth_factorial.get_mpz_t());
    const FracEstimate tail = frac_factorial(f(k), alpha);
    ExactFraction phase = make_fraction(shifted, depth_factorial) + tail.value;
    if (phase >= 1) phase -= 1;
    out.trace.push(to_double(phase));
    if (!exact) {
      out.phase_error += 2.0 * std::numbers::pi *
                         (static_cast<double>(k) * inv_depth_factorial + to_double(tail.error_bound));
    }
    record(out, checkpoints, next_checkpoint, k);
  }
  return out;
}

double bound_theoretical(const GrowthFunction& f, const WeightSequence& a, const Angle& alpha,
                         std::uint64_t n) {
  if (n < 1) throw DomainError("bound_theoretical expects N >= 1");
  ExactFraction reciprocal_weights = a.partial_sum_reciprocals(n);
  ExactFraction reciprocal_growth = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const std::uint64_t fk = f(k);
    // Beyond 64 bits 1/(f(k)+1) < 6e-20; those terms are dropped.
    if (fk == kSaturated) break;
    reciprocal_growth += make_fraction(1, to_big(fk) + 1);
  }
  const double inner = to_double(reciprocal_weights) + std::numbers::e * to_double(reciprocal_growth);
  return dirichlet_bound(alpha) * (1.0 + 4.0 * std::numbers::pi * inner);
}

DigitTailCheck digit_tail_check(const GrowthFunction& f, const WeightSequence& a,
                                const FactoradicReal& alpha, std::uint64_t n) {
  const std::uint64_t fn = f(n);
  if (fn == kSaturated) throw DomainError("f(" + std::to_string(n) + ") overflows 64 bits");
  const FracEstimate frac = frac_factorial(fn, alpha);
  ExactFraction lhs = frac.value + frac.error_bound;
  ExactFraction rhs = make_fraction(1, a(n)) + e_upper_bound() / ExactFraction(to_big(fn) + 1);
  const bool holds = lhs <= rhs;
  return {std::move(lhs), std::move(rhs), holds};
}

}  // namespace besum
