#pragma once

// Command-line front end: every verb validates an ExperimentConfig, computes,
// and writes one CSV or JSON artifact that starts with a provenance header.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 config error, 3 resource budget,
// 4 insufficient depth.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "besum/errors.hpp"

namespace besum::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitResource = 3,
  kExitDepth = 4,
};

/// Invalid configuration; `field` names the offending option.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("--" + field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Format { kAuto, kCsv, kJson };

struct ExperimentConfig {
  std::string verb;
  std::string action;  ///< factoradic: encode|decode; construct: af

  std::string f = "n2";
  std::string a = "n2";
  std::optional<std::string> alpha;         ///< "p/q"
  std::optional<std::string> alpha_digits;  ///< digit file
  std::vector<std::string> alphas;          ///< sup-sweep list
  std::uint64_t q_max = 0;                  ///< sup-sweep: all reduced p/q with q <= q_max
  std::uint64_t n = 0;
  std::string schedule = "log";             ///< log | every:K
  std::uint64_t depth = 32;
  std::uint64_t seed = 1;
  std::uint64_t count = 1;
  std::uint64_t n_max = 0;
  std::uint64_t j_max = 0;
  double s = 0.5;
  std::uint64_t i0 = 3;
  std::uint64_t i_max = 8;
  std::uint64_t samples = 64;
  double eps = 0.5;
  std::optional<std::string> coeffs;
  std::uint64_t max_period = 100;
  std::uint64_t max_preperiod = 100;
  double theta1 = 0.0;
  double theta2 = 1.0;
  std::vector<double> radii;
  std::uint64_t theta_steps = 16;
  std::uint64_t a_max = 0;
  std::uint64_t q = 0;
  std::optional<std::string> x;  ///< factoradic encode input "p/q"
  std::optional<std::string> digits_dir;

  std::optional<std::string> out;
  Format format = Format::kAuto;
  std::uint64_t threads = 1;
  bool dry_run = false;
  std::uint64_t bit_budget = 10'000'000;
};

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& config);

/// Normalized, output-relevant view of the config (no out path, thread count
/// or dry-run flag).
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Validates and executes; returns an ExitCode. Output goes to config.out when
/// set, else to `out`; diagnostics go to `err`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11, optional --config file) and runs. BESUM_BIT_BUDGET in
/// the environment overrides the big-integer budget.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

/// 1, 2, 5 per decade up to n, always ending at n.
std::vector<std::uint64_t> log_schedule(std::uint64_t n);

}  // namespace besum::cli
