#pragma once

#include <string>
#include <vector>

#include "qfock/config.hpp"
#include "qfock/report.hpp"

namespace qfock {

// Outcome of one suite at one q: its reports and series, plus orchestration
// bookkeeping. A mathematical error raised inside a suite (positivity
// failure, polar degeneracy, ...) is recorded in `error` and fails the suite
// instead of crashing the run.
struct SuiteResult {
  std::string suite;
  double q = 0.0;
  std::vector<VerificationReport> reports;
  std::vector<DecaySeries> series;
  std::vector<std::string> notes;
  std::string error;
  bool pass = true;
  double wall_seconds = 0.0;
};

struct RunManifest {
  RunConfig config;
  std::vector<SuiteResult> suites;
  bool overall_pass = true;
};

// Execute one suite for one q value. Pure apart from the shared frame cache.
SuiteResult execute_suite(const std::string& suite, const RunConfig& config,
                          double q);

// Execute every configured suite for every q, write one JSON file per
// report, one CSV (plus JSON sidecar) per series, and manifest.json, all
// into config.output_dir.
RunManifest run(const RunConfig& config);

std::string print_summary(const RunManifest& manifest);

}  // namespace qfock
