#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "besum/construction.hpp"
#include "besum/dimension.hpp"
#include "besum/expsum.hpp"
#include "besum/factoradic.hpp"
#include "besum/periodicity.hpp"

#ifndef BESUM_VERSION
#define BESUM_VERSION "0.0.0"
#endif

namespace besum::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kVerbs = {"sum",        "sup-sweep", "factoradic", "construct", "membership",
                                         "sample-e",   "bound",     "dimension",  "mass-check", "cond-ii",
                                         "periodicity", "sector-eval", "qn-demo"};

/// One emitted artifact: a table, a structured report, or raw text.
struct Artifact {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  Json report;
  std::vector<std::string> notes;
  std::optional<std::string> raw;
};

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

std::string num(std::uint64_t x) { return std::to_string(x); }

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

struct RationalAngle {
  std::uint64_t p;
  std::uint64_t q;
};

RationalAngle parse_angle(const std::string& text, const std::string& field) {
  ExactFraction alpha;
  try {
    alpha = parse_fraction(text);
  } catch (const ParseError& e) {
    throw ConfigError(field, e.what());
  }
  if (alpha <= 0 || alpha >= 1) throw ConfigError(field, "alpha must lie in (0,1), got " + text);
  if (!alpha.get_den().fits_ulong_p() || alpha.get_den() >= BigInt("4294967296")) {
    throw ConfigError(field, "denominator must be below 2^32");
  }
  return {alpha.get_num().get_ui(), alpha.get_den().get_ui()};
}

void require_file(const std::optional<std::string>& path, const std::string& field) {
  if (!path) throw ConfigError(field, "is required");
  if (!std::filesystem::is_regular_file(*path)) throw ConfigError(field, "file not found: " + *path);
}

void check_growth(const std::string& name) {
  const auto names = growth_function_names();
  if (!contains(names, name)) {
    throw ConfigError("f", "unknown growth function '" + name + "' (known: " + join(names) + ")");
  }
}

void check_weight(const std::string& name) {
  const auto names = weight_sequence_names();
  if (!contains(names, name)) {
    throw ConfigError("a", "unknown weight sequence '" + name + "' (known: " + join(names) + ")");
  }
}

std::vector<std::uint64_t> parse_schedule(const ExperimentConfig& c) {
  if (c.schedule == "log") return log_schedule(c.n);
  if (c.schedule.rfind("every:", 0) == 0) {
    std::uint64_t step = 0;
    try {
      step = std::stoull(c.schedule.substr(6));
    } catch (const std::logic_error&) {
    }
    if (step == 0) throw ConfigError("schedule", "expected every:K with K >= 1");
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = step; k < c.n; k += step) out.push_back(k);
    out.push_back(c.n);
    return out;
  }
  throw ConfigError("schedule", "expected 'log' or 'every:K', got '" + c.schedule + "'");
}

std::vector<RationalAngle> sweep_angles(const ExperimentConfig& c) {
  std::vector<RationalAngle> out;
  for (const auto& text : c.alphas) out.push_back(parse_angle(text, "alphas"));
  for (std::uint64_t q = 2; q <= c.q_max; ++q) {
    for (std::uint64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) == 1) out.push_back({p, q});
    }
  }
  return out;
}

bool table_verb(const ExperimentConfig& c) {
  static const std::vector<std::string> json_only = {"membership", "mass-check", "periodicity"};
  if (c.verb == "factoradic") return false;
  return !contains(json_only, c.verb);
}

Format resolve_format(const ExperimentConfig& c) {
  if (c.format != Format::kAuto) return c.format;
  if (c.out) {
    const auto ext = std::filesystem::path(*c.out).extension().string();
    if (ext == ".json") return Format::kJson;
    if (ext == ".csv") return Format::kCsv;
  }
  return table_verb(c) && c.verb != "dimension" ? Format::kCsv : Format::kJson;
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

void add_sum_row(Artifact& art, const std::vector<std::string>& prefix, const SumSnapshot& snap) {
  std::vector<std::string> row = prefix;
  row.push_back(num(snap.n));
  row.push_back(num(snap.sum.real()));
  row.push_back(num(snap.sum.imag()));
  row.push_back(num(std::abs(snap.sum)));
  row.push_back(num(snap.sup_modulus));
  row.push_back(num(snap.sup_at));
  art.rows.push_back(std::move(row));
}

Artifact run_sum(const ExperimentConfig& c) {
  Artifact art;
  const auto f = growth_function(c.f);
  const auto checkpoints = parse_schedule(c);
  art.notes.push_back("sup_modulus is the empirical_sup over the explored N range");
  if (c.alpha) {
    const auto [p, q] = parse_angle(*c.alpha, "alpha");
    art.columns = {"alpha_num", "alpha_den", "N", "re", "im", "modulus", "sup_modulus", "sup_at"};
    const AfSum result = af_sum_rational(f, p, q, c.n, checkpoints);
    for (const auto& snap : result.snapshots) add_sum_row(art, {num(p), num(q)}, snap);
    return art;
  }
  const FactoradicReal alpha = read_digit_file(*c.alpha_digits);
  art.columns = {"alpha_digits_file", "N", "re", "im", "modulus", "sup_modulus", "sup_at", "phase_error"};
  const AfSum result = af_sum_factoradic(f, alpha, c.n, checkpoints);
  const std::string name = std::filesystem::path(*c.alpha_digits).filename().string();
  for (const auto& snap : result.snapshots) {
    add_sum_row(art, {name}, snap);
    art.rows.back().push_back(num(result.phase_error));
  }
  return art;
}

Artifact run_sup_sweep(const ExperimentConfig& c) {
  Artifact art;
  const auto f = growth_function(c.f);
  const auto angles = sweep_angles(c);
  art.columns = {"alpha_num", "alpha_den", "N",           "re",           "im",
                 "modulus",   "sup_modulus", "sup_at", "eq4_bound", "within_bound"};
  art.notes.push_back("sup_modulus is the empirical_sup over N <= the stated N");
  std::vector<std::vector<std::string>> rows(angles.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < angles.size(); k = next++) {
      const auto [p, q] = angles[k];
      const AfSum result = af_sum_rational(f, p, q, c.n);
      const double bound = rational_sum_bound(f, p, q);
      const Complex z = result.sum();
      rows[k] = {num(p),
                 num(q),
                 num(c.n),
                 num(z.real()),
                 num(z.imag()),
                 num(std::abs(z)),
                 num(result.trace.sup_modulus()),
                 num(result.trace.sup_at()),
                 num(bound),
                 result.trace.sup_modulus() <= bound ? "true" : "false"};
    }
  };
  const std::size_t width = std::max<std::uint64_t>(1, std::min<std::uint64_t>(c.threads, angles.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  art.rows = std::move(rows);
  return art;
}

Artifact run_factoradic(const ExperimentConfig& c) {
  Artifact art;
  if (c.action == "encode") {
    const FactoradicReal digits = encode(parse_fraction(*c.x), c.depth);
    std::ostringstream text;
    write_digit_file(text, digits);
    art.raw = text.str();
    return art;
  }
  const FactoradicReal digits = read_digit_file(*c.alpha_digits);
  const Interval bounds = decode(digits);
  art.report = {{"depth", digits.depth()},
                {"tail", digits.tail() == TailPolicy::kZero ? "ZERO" : "UNKNOWN"},
                {"lower", to_string(bounds.lower)},
                {"upper", to_string(bounds.upper)},
                {"lower_approx", to_double(bounds.lower)},
                {"upper_approx", to_double(bounds.upper)},
                {"rational", is_rational_by_digits(digits) == Rationality::kRational ? "true" : "unknown-at-depth"}};
  return art;
}

Artifact run_construct(const ExperimentConfig& c) {
  Artifact art;
  const auto f = growth_function(c.f);
  const auto elements = af_elements(f, c.n_max, c.bit_budget);
  art.columns = {"n", "element"};
  for (std::size_t k = 0; k < elements.size(); ++k) art.rows.push_back({num(k + 1), to_string(elements[k])});
  return art;
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::kIn:
      return "in";
    case Membership::kOut:
      return "out";
    case Membership::kUnknownAtDepth:
      break;
  }
  return "unknown-at-depth";
}

Artifact run_membership(const ExperimentConfig& c) {
  Artifact art;
  const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
  const FactoradicReal alpha = read_digit_file(*c.alpha_digits);
  art.report = {{"f", c.f}, {"a", c.a}, {"depth", alpha.depth()}, {"membership", membership_name(membership(set, alpha))}};
  return art;
}

Artifact run_sample_e(const ExperimentConfig& c) {
  Artifact art;
  const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
  art.columns = {"sample", "seed", "alpha_approx", "membership", "digits"};
  if (c.digits_dir) std::filesystem::create_directories(*c.digits_dir);
  for (std::uint64_t k = 0; k < c.count; ++k) {
    const std::uint64_t seed = c.seed + k;
    const FactoradicReal alpha = sample_E(set, c.depth, seed);
    std::string digits;
    for (auto d : alpha.digits()) digits += (digits.empty() ? "" : " ") + std::to_string(d);
    art.rows.push_back({num(k), num(seed), num(to_double(decode(alpha).lower)),
                        membership_name(membership(set, alpha)), digits});
    if (c.digits_dir) {
      std::ofstream file(std::filesystem::path(*c.digits_dir) / ("sample_" + std::to_string(k) + ".fac"));
      write_digit_file(file, alpha);
    }
  }
  return art;
}

Artifact run_bound(const ExperimentConfig& c) {
  Artifact art;
  const auto f = growth_function(c.f);
  const auto a = weight_sequence(c.a);
  const auto [p, q] = parse_angle(*c.alpha, "alpha");
  const Angle angle = Angle::rational(make_fraction(BigInt(std::to_string(p)), BigInt(std::to_string(q))));
  const auto checkpoints = parse_schedule(c);
  const AfSum result = af_sum_rational(f, p, q, c.n, checkpoints);
  art.columns = {"alpha_num", "alpha_den", "N", "modulus", "sup_modulus", "bound_theoretical", "within_bound"};
  for (const auto& snap : result.snapshots) {
    const double bound = bound_theoretical(f, a, angle, snap.n);
    art.rows.push_back({num(p), num(q), num(snap.n), num(std::abs(snap.sum)), num(snap.sup_modulus), num(bound),
                        snap.sup_modulus <= bound ? "true" : "false"});
  }
  return art;
}

Artifact run_dimension(const ExperimentConfig& c) {
  Artifact art;
  const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
  const auto series = dimension_lower_estimate(set, c.j_max);
  art.columns = {"j", "log_count_over_log_factorial"};
  Json points = Json::array();
  for (const auto& point : series) {
    art.rows.push_back({num(point.j), num(point.ratio)});
    points.push_back({{"j", point.j}, {"ratio", point.ratio}});
  }
  art.report = {{"f", c.f}, {"a", c.a}, {"j_max", c.j_max}, {"series", std::move(points)}};
  return art;
}

Artifact run_mass_check(const ExperimentConfig& c) {
  Artifact art;
  const DigitConstraintSet set(growth_function(c.f), weight_sequence(c.a));
  const MassCheckReport report = mass_check(set, c.s, c.i0, c.i_max, c.seed, c.samples);
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"depth", v.depth},
                          {"B_lo", to_double(v.lo)},
                          {"B_hi", to_double(v.hi)},
                          {"mu", to_double(v.mu)},
                          {"bound", v.bound}});
  }
  art.report = {{"s", report.s},
                {"i0", report.i0},
                {"i_max", report.i_max},
                {"a_constant", report.a_constant},
                {"intervals_tested", report.intervals_tested},
                {"violations", std::move(violations)}};
  return art;
}

Artifact run_cond_ii(const ExperimentConfig& c) {
  Artifact art;
  const auto result = condition_ii_check(growth_function(c.f), c.eps, c.i_max);
  art.columns = {"i", "g"};
  for (std::size_t k = 0; k < result.series.size(); ++k) art.rows.push_back({num(k + 1), num(result.series[k])});
  art.report = {{"f", c.f},
                {"eps", c.eps},
                {"i_max", c.i_max},
                {"sup_log", result.sup_log},
                {"attained_at", result.attained_at},
                {"g_at_i_max", result.series.back()}};
  return art;
}

Artifact run_periodicity(const ExperimentConfig& c) {
  Artifact art;
  const CoefficientSequence coeffs = read_coeff_stream(*c.coeffs);
  const auto period = detect_ultimate_period(coeffs, c.max_preperiod, c.max_period);
  art.report = {{"length", coeffs.size()}, {"max_preperiod", c.max_preperiod}, {"max_period", c.max_period}};
  if (!period) {
    art.report["period"] = nullptr;
    art.report["collapse"] = nullptr;
    return art;
  }
  const bool collapse = period_collapse_test(coeffs, period->preperiod, period->period);
  const auto symbols = coeffs.symbols();
  const bool constant_tail = std::all_of(symbols.begin() + static_cast<std::ptrdiff_t>(period->preperiod),
                                         symbols.end(),
                                         [&](std::uint32_t s) { return s == symbols[period->preperiod]; });
  art.report["period"] = {{"K", period->preperiod}, {"q", period->period}};
  art.report["collapse"] = collapse;
  art.report["constant_tail_scan"] = constant_tail;
  return art;
}

Artifact run_sector_eval(const ExperimentConfig& c) {
  Artifact art;
  const CoefficientSequence coeffs = read_coeff_stream(*c.coeffs);
  SectorSpec spec{c.theta1, c.theta2, c.radii, c.theta_steps};
  const std::size_t a_max = c.a_max ? c.a_max : coeffs.size() - 1;
  const SectorGrid grid = sector_eval(coeffs, spec, a_max);
  art.columns = {"r", "theta", "re", "im", "modulus"};
  for (std::size_t r = 0; r < grid.radii.size(); ++r) {
    for (std::size_t t = 0; t < grid.thetas.size(); ++t) {
      const Complex z = grid.values[r * grid.thetas.size() + t];
      art.rows.push_back({num(grid.radii[r]), num(grid.thetas[t]), num(z.real()), num(z.imag()), num(std::abs(z))});
    }
  }
  art.report = {{"A", a_max},
                {"max_modulus", grid.max_modulus},
                {"argmax_radius", grid.argmax_radius},
                {"argmax_theta", grid.argmax_theta}};
  return art;
}

Artifact run_qn_demo(const ExperimentConfig& c) {
  Artifact art;
  const auto [p, den] = parse_angle(*c.alpha, "alpha");
  const ExactFraction alpha = make_fraction(BigInt(std::to_string(p)), BigInt(std::to_string(den)));
  const double sup = qn_counterexample_sup(c.q, alpha, c.n);
  const bool resonant = (c.q * p) % den == 0;
  art.columns = {"q", "alpha_num", "alpha_den", "N", "empirical_sup", "regime", "reference"};
  const double reference = resonant ? static_cast<double>(c.n / c.q)
                                    : dirichlet_bound(static_cast<double>((c.q * p) % den) / static_cast<double>(den)) + 1.0;
  art.rows.push_back({num(c.q), num(p), num(den), num(c.n), num(sup), resonant ? "linear" : "bounded", num(reference)});
  art.report = {{"q", c.q},       {"alpha", to_string(alpha)},          {"N", c.n},
                {"empirical_sup", sup}, {"regime", resonant ? "linear" : "bounded"}, {"reference", reference}};
  return art;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json provenance(const ExperimentConfig& c) {
  return {{"tool", "besum"},
          {"version", BESUM_VERSION},
          {"verb", c.verb},
          {"config_hash", config_hash(c)},
          {"seed", c.seed}};
}

void emit(const ExperimentConfig& c, const Artifact& art, std::ostream& out) {
  if (art.raw) {
    out << *art.raw;
    return;
  }
  const Format format = resolve_format(c);
  if (format == Format::kCsv) {
    out << "# besum " << BESUM_VERSION << "\n"
        << "# config_hash=" << config_hash(c) << "\n"
        << "# seed=" << c.seed << "\n"
        << "# config=" << canonical_config(c) << "\n";
    for (const auto& note : art.notes) out << "# " << note << "\n";
    for (std::size_t k = 0; k < art.columns.size(); ++k) out << (k ? "," : "") << art.columns[k];
    out << "\n";
    for (const auto& row : art.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_field(row[k]);
      out << "\n";
    }
    return;
  }
  Json doc = {{"provenance", provenance(c)}};
  if (!art.report.is_null()) {
    doc["result"] = art.report;
  } else {
    Json rows = Json::array();
    for (const auto& row : art.rows) rows.push_back(row);
    doc["result"] = {{"columns", art.columns}, {"rows", std::move(rows)}};
  }
  if (!art.notes.empty()) doc["notes"] = art.notes;
  out << doc.dump(2) << "\n";
}

Artifact dispatch(const ExperimentConfig& c) {
  if (c.verb == "sum") return run_sum(c);
  if (c.verb == "sup-sweep") return run_sup_sweep(c);
  if (c.verb == "factoradic") return run_factoradic(c);
  if (c.verb == "construct") return run_construct(c);
  if (c.verb == "membership") return run_membership(c);
  if (c.verb == "sample-e") return run_sample_e(c);
  if (c.verb == "bound") return run_bound(c);
  if (c.verb == "dimension") return run_dimension(c);
  if (c.verb == "mass-check") return run_mass_check(c);
  if (c.verb == "cond-ii") return run_cond_ii(c);
  if (c.verb == "periodicity") return run_periodicity(c);
  if (c.verb == "sector-eval") return run_sector_eval(c);
  return run_qn_demo(c);
}

}  // namespace

std::vector<std::uint64_t> log_schedule(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t decade = 1; decade <= n; decade *= 10) {
    for (std::uint64_t mult : {1, 2, 5}) {
      const std::uint64_t value = decade * mult;
      if (value < n) out.push_back(value);
    }
    if (decade > n / 10) break;
  }
  if (n >= 1) out.push_back(n);
  return out;
}

void validate(const ExperimentConfig& c) {
  if (!contains(kVerbs, c.verb)) throw ConfigError("verb", "unknown verb '" + c.verb + "' (known: " + join(kVerbs) + ")");
  if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
  if (c.format == Format::kCsv && !table_verb(c)) throw ConfigError("format", c.verb + " emits JSON only");

  const auto& v = c.verb;
  const bool uses_f = v == "sum" || v == "sup-sweep" || v == "construct" || v == "membership" || v == "sample-e" ||
                      v == "bound" || v == "dimension" || v == "mass-check" || v == "cond-ii";
  const bool uses_a = v == "membership" || v == "sample-e" || v == "bound" || v == "dimension" || v == "mass-check";
  if (uses_f) check_growth(c.f);
  if (uses_a) check_weight(c.a);

  if (v == "sum") {
    if (c.alpha.has_value() == c.alpha_digits.has_value()) {
      throw ConfigError("alpha", "give exactly one of --alpha p/q or --alpha-digits file");
    }
    if (c.alpha) parse_angle(*c.alpha, "alpha");
    if (c.alpha_digits) require_file(c.alpha_digits, "alpha-digits");
    if (c.n < 1) throw ConfigError("N", "must be at least 1");
    parse_schedule(c);
  } else if (v == "sup-sweep") {
    if (c.alphas.empty() && c.q_max < 2) throw ConfigError("alphas", "give --alphas p/q ... or --qmax Q >= 2");
    sweep_angles(c);
    if (c.n < 1) throw ConfigError("N", "must be at least 1");
  } else if (v == "factoradic") {
    if (c.action == "encode") {
      if (!c.x) throw ConfigError("x", "is required for encode");
      ExactFraction x;
      try {
        x = parse_fraction(*c.x);
      } catch (const ParseError& e) {
        throw ConfigError("x", e.what());
      }
      if (x < 0 || x >= 1) throw ConfigError("x", "must lie in [0,1)");
      if (c.depth < 2) throw ConfigError("depth", "must be at least 2");
    } else if (c.action == "decode") {
      require_file(c.alpha_digits, "digits");
    } else {
      throw ConfigError("action", "factoradic expects encode or decode");
    }
  } else if (v == "construct") {
    if (c.action != "af") throw ConfigError("action", "construct expects 'af'");
    if (c.n_max < 1) throw ConfigError("nmax", "must be at least 1");
  } else if (v == "membership") {
    require_file(c.alpha_digits, "alpha-digits");
  } else if (v == "sample-e") {
    if (c.depth < 2) throw ConfigError("depth", "must be at least 2");
    if (c.count < 1) throw ConfigError("count", "must be at least 1");
  } else if (v == "bound") {
    if (!c.alpha) throw ConfigError("alpha", "is required");
    parse_angle(*c.alpha, "alpha");
    if (c.n < 1) throw ConfigError("N", "must be at least 1");
    parse_schedule(c);
  } else if (v == "dimension") {
    if (c.j_max < 4) throw ConfigError("jmax", "must be at least 4");
  } else if (v == "mass-check") {
    if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("s", "must lie in (0,1)");
    if (c.i0 < 2) throw ConfigError("i0", "must be at least 2");
    if (c.i_max <= c.i0) throw ConfigError("imax", "must exceed --i0");
  } else if (v == "cond-ii") {
    if (!(c.eps > 0.0 && c.eps < 1.0)) throw ConfigError("eps", "must lie in (0,1)");
    if (c.i_max < 1) throw ConfigError("imax", "must be at least 1");
  } else if (v == "periodicity") {
    require_file(c.coeffs, "coeffs");
    if (c.max_period < 1) throw ConfigError("max-period", "must be at least 1");
  } else if (v == "sector-eval") {
    require_file(c.coeffs, "coeffs");
    if (!(c.theta1 >= 0.0 && c.theta1 < c.theta2 && c.theta2 <= 1.0)) {
      throw ConfigError("theta1", "need 0 <= theta1 < theta2 <= 1");
    }
    if (c.radii.empty()) throw ConfigError("radii", "give at least one radius");
    for (double r : c.radii) {
      if (!(r >= 0.0 && r < 1.0)) throw ConfigError("radii", "radii must lie in [0,1)");
    }
    if (c.theta_steps < 1) throw ConfigError("theta-steps", "must be at least 1");
  } else if (v == "qn-demo") {
    if (c.q < 2) throw ConfigError("q", "must be at least 2");
    if (!c.alpha) throw ConfigError("alpha", "is required");
    parse_angle(*c.alpha, "alpha");
    if (c.n < 1) throw ConfigError("N", "must be at least 1");
  }
}

std::string canonical_config(const ExperimentConfig& c) {
  auto opt = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
  auto file_name = [](const std::optional<std::string>& s) {
    return s ? Json(std::filesystem::path(*s).filename().string()) : Json(nullptr);
  };
  Json j = {{"verb", c.verb},
            {"action", c.action},
            {"f", c.f},
            {"a", c.a},
            {"alpha", opt(c.alpha)},
            {"alpha_digits", file_name(c.alpha_digits)},
            {"alphas", c.alphas},
            {"qmax", c.q_max},
            {"N", c.n},
            {"schedule", c.schedule},
            {"depth", c.depth},
            {"seed", c.seed},
            {"count", c.count},
            {"nmax", c.n_max},
            {"jmax", c.j_max},
            {"s", c.s},
            {"i0", c.i0},
            {"imax", c.i_max},
            {"samples", c.samples},
            {"eps", c.eps},
            {"coeffs", file_name(c.coeffs)},
            {"max_period", c.max_period},
            {"max_preperiod", c.max_preperiod},
            {"theta1", c.theta1},
            {"theta2", c.theta2},
            {"radii", c.radii},
            {"theta_steps", c.theta_steps},
            {"A", c.a_max},
            {"q", c.q},
            {"x", opt(c.x)},
            {"format", c.format == Format::kCsv ? "csv" : c.format == Format::kJson ? "json" : "auto"},
            {"bit_budget", c.bit_budget}};
  return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(c)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.dry_run) {
      Json plan = {{"dry_run", true},
                   {"verb", config.verb},
                   {"config_hash", config_hash(config)},
                   {"config", Json::parse(canonical_config(config))},
                   {"output", config.out ? Json(*config.out) : Json("stdout")}};
      out << plan.dump(2) << "\n";
      return kExitOk;
    }
    const Artifact art = dispatch(config);
    if (config.out) {
      std::ofstream file(*config.out, std::ios::binary);
      if (!file) throw ConfigError("out", "cannot open " + *config.out);
      emit(config, art, file);
    } else {
      emit(config, art, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InsufficientDepthError& e) {
    err << "insufficient depth: " << e.what() << "\n";
    return kExitDepth;
  } catch (const ResourceError& e) {
    err << "resource budget: " << e.what() << "\n";
    return kExitResource;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (const char* budget = std::getenv("BESUM_BIT_BUDGET")) {
    try {
      config.bit_budget = std::stoull(budget);
    } catch (const std::logic_error&) {
      err << "config error: BESUM_BIT_BUDGET must be a non-negative integer\n";
      return kExitConfig;
    }
  }

  CLI::App app{"besum: bounded exponential sums laboratory"};
  app.set_version_flag("--version", std::string(BESUM_VERSION));
  app.set_config("--config", "", "INI/TOML file with option values");
  app.require_subcommand(1);

  std::string format_text = "auto";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out, "Output file (default stdout)");
    sub->add_option("--format", format_text, "csv | json | auto")->check(CLI::IsMember({"csv", "json", "auto"}));
    sub->add_flag("--dry-run", config.dry_run, "Validate and print the plan only");
    sub->add_option("--threads", config.threads, "Worker threads");
    sub->add_option("--seed", config.seed, "Random seed");
  };
  auto growth = [&](CLI::App* sub) { sub->add_option("--f", config.f, "Growth function (id, n2, n3, pow2)"); };
  auto weights = [&](CLI::App* sub) { sub->add_option("--a", config.a, "Weight sequence (n2, n3, pow2, nlog2)"); };

  auto* sum = app.add_subcommand("sum", "Partial sums over A(f) at a rational or factoradic alpha");
  growth(sum);
  sum->add_option("--alpha", config.alpha, "Rational angle p/q");
  sum->add_option("--alpha-digits", config.alpha_digits, "Factoradic digit file");
  sum->add_option("--N", config.n, "Number of terms")->required();
  sum->add_option("--schedule", config.schedule, "Snapshot schedule: log | every:K");

  auto* sweep = app.add_subcommand("sup-sweep", "Empirical sup vs the rational bound over many p/q");
  growth(sweep);
  sweep->add_option("--alphas", config.alphas, "Angles p/q");
  sweep->add_option("--qmax", config.q_max, "All reduced p/q with q <= Q");
  sweep->add_option("--N", config.n, "Number of terms")->required();

  auto* fac = app.add_subcommand("factoradic", "Factoradic digit files");
  fac->require_subcommand(1);
  auto* enc = fac->add_subcommand("encode", "Encode p/q");
  enc->add_option("--x", config.x, "Value p/q in [0,1)")->required();
  enc->add_option("--depth", config.depth, "Digit depth D");
  auto* dec = fac->add_subcommand("decode", "Decode a digit file");
  dec->add_option("--digits", config.alpha_digits, "Digit file")->required();

  auto* construct = app.add_subcommand("construct", "Elements of A(f)");
  construct->add_option("action", config.action, "af")->required();
  growth(construct);
  construct->add_option("--nmax", config.n_max, "Largest index n")->required();

  auto* member = app.add_subcommand("membership", "Membership of a digit file in E(f,a)");
  growth(member);
  weights(member);
  member->add_option("--alpha-digits", config.alpha_digits, "Digit file")->required();

  auto* sample = app.add_subcommand("sample-e", "Seeded samples of E(f,a)");
  growth(sample);
  weights(sample);
  sample->add_option("--depth", config.depth, "Digit depth");
  sample->add_option("--count", config.count, "Number of samples");
  sample->add_option("--digits-dir", config.digits_dir, "Also write each sample as a digit file here");

  auto* bound = app.add_subcommand("bound", "Partial sums against the E(f,a) bound");
  growth(bound);
  weights(bound);
  bound->add_option("--alpha", config.alpha, "Rational angle p/q")->required();
  bound->add_option("--N", config.n, "Number of terms")->required();
  bound->add_option("--schedule", config.schedule, "Snapshot schedule: log | every:K");

  auto* dim = app.add_subcommand("dimension", "log count / log j! series");
  growth(dim);
  weights(dim);
  dim->add_option("--jmax", config.j_max, "Largest depth j")->required();

  auto* mass = app.add_subcommand("mass-check", "Mass distribution check of the cylinder measure");
  growth(mass);
  weights(mass);
  mass->add_option("--s", config.s, "Exponent s in (0,1)");
  mass->add_option("--i0", config.i0, "First depth");
  mass->add_option("--imax", config.i_max, "Depth bound (exclusive)");
  mass->add_option("--samples", config.samples, "Random intervals per depth");

  auto* cond = app.add_subcommand("cond-ii", "Growth of sum log(f(j)+1) - eps log i!");
  growth(cond);
  cond->add_option("--eps", config.eps, "Exponent eps in (0,1)");
  cond->add_option("--imax", config.i_max, "Largest i")->required();

  auto* period = app.add_subcommand("periodicity", "Ultimate period detection and collapse test");
  period->add_option("--coeffs", config.coeffs, "Coefficient stream")->required();
  period->add_option("--max-period", config.max_period, "Largest period q");
  period->add_option("--max-preperiod", config.max_preperiod, "Largest preperiod K");

  auto* sector = app.add_subcommand("sector-eval", "Power series on a disk sector");
  sector->add_option("--coeffs", config.coeffs, "Coefficient stream")->required();
  sector->add_option("--theta1", config.theta1, "Sector start (turns)");
  sector->add_option("--theta2", config.theta2, "Sector end (turns)");
  sector->add_option("--radii", config.radii, "Radii below 1")->required();
  sector->add_option("--theta-steps", config.theta_steps, "Angles sampled");
  sector->add_option("--A", config.a_max, "Truncation order (default: prefix length - 1)");

  auto* qn = app.add_subcommand("qn-demo", "The {qn} family: bounded off p/q, linear at p/q");
  qn->add_option("--q", config.q, "Step q >= 2")->required();
  qn->add_option("--alpha", config.alpha, "Rational angle p/q")->required();
  qn->add_option("--N", config.n, "Range N")->required();

  for (auto* sub : {sum, sweep, enc, dec, construct, member, sample, bound, dim, mass, cond, period, sector, qn}) {
    common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests arrive here with a zero exit code.
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (auto* sub : app.get_subcommands()) {
    config.verb = sub->get_name();
    if (sub == fac) config.action = fac->get_subcommands().front()->get_name();
  }
  config.format = format_text == "csv" ? Format::kCsv : format_text == "json" ? Format::kJson : Format::kAuto;
  return run(config, out, err);
}

}  // namespace besum::cli
