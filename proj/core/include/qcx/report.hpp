#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcx {

enum class Mode {
  verify_derivatives,
  quasiconvexity,
  convexifiability,
  alpha_one,
  lambda_search,
  full_suite,
};

enum class OutputFormat { json, csv, text };

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct Tolerances {
  double grad = 1e-6;     // relative, closed-form vs finite-difference gradient
  double hess = 1e-4;     // relative (1 + |H|_F), Hessian vs finite differences
  double cert = 1e-10;    // certificate tolerance, relative to |D^2u|_F |xi|^2
  double segment = 1e-10; // quasi-convexity slack, relative to 1 + |max u|
};

struct Box {
  double lo;
  double hi;
};

/// Everything a run depends on. Unset optionals take per-mode defaults,
/// which are echoed in the report.
struct RunConfig {
  Mode mode = Mode::full_suite;
  std::vector<double> alphas;
  std::optional<std::array<double, 3>> point;
  std::optional<long long> samples;
  std::uint64_t seed = kDefaultSeed;
  Tolerances tol;
  OutputFormat format = OutputFormat::json;
  std::optional<Box> box;
  unsigned threads = 1;
  bool timing = false;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

/// Throws ConfigError on: samples < 1, non-positive or inverted box,
/// non-positive alpha or coordinate, mode/alpha mismatches
/// (convexifiability needs alpha <= 1, alpha-one exactly 1, lambda-search
/// alpha > 1), or --alpha combined with full-suite.
void validate(const RunConfig& config);

struct RunOutcome {
  std::string output;  // rendered in config.format
  int exit_status;     // 0 all checks pass, 1 otherwise
  std::size_t checks;
  std::size_t failed_checks;
};

/// Validates, executes the selected suite and renders the report.
/// Identical configs give byte-identical output unless timing is on.
RunOutcome run(const RunConfig& config);

}  // namespace qcx
