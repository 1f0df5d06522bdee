#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qfock {

// Batch-run configuration. File format: flat `key = value` lines, `#`
// comments, comma-separated lists for q_list and suites. Every field is also
// settable by a command-line flag, and flags override the file.
struct RunConfig {
  int n = 2;
  std::vector<double> q_list = {0.5};
  int N = 6;
  std::vector<std::string> suites = {"relations"};
  int k_max = 2;
  int trials = 200;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  double tol_exact = 1e-10;
  double tol_spectral = 1e-6;
};

const std::vector<std::string>& known_suites();

// Apply one key/value setting; throws ConfigError on unknown keys or
// malformed values. Keys: n, q (or q_list), levels (or N), suites, k_max,
// trials, seed, out (or output_dir), tol_exact, tol_spectral.
void apply_setting(RunConfig& config, const std::string& key,
                   const std::string& value);

RunConfig parse_config_file(const std::string& path);

// Full validation; throws ConfigError with a usage-grade message.
void validate_config(const RunConfig& config);

}  // namespace qfock
