#pragma once

#include <map>
#include <string>

namespace qfock {

// Structured outcome of one exact-identity check: the worst residual, the
// per-level breakdown over the interior levels the check covers, and the
// tolerance it was judged against.
struct VerificationReport {
  std::string name;
  double max_residual = 0.0;
  std::map<int, double> per_level;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, double> metadata;

  // Fold one level's residual into the report (keeps the per-level maximum).
  void record(int level, double residual) {
    auto it = per_level.find(level);
    if (it == per_level.end() || it->second < residual) {
      per_level[level] = residual;
    }
    if (residual > max_residual) max_residual = residual;
  }

  // Freeze the verdict: pass iff max_residual <= tolerance. The tolerance is
  // mirrored into metadata so a serialized report is self-describing.
  void finalize() {
    metadata["tolerance"] = tolerance;
    pass = max_residual <= tolerance;
  }
};

// A measured norm sequence swept over an integer parameter, with a log-linear
// decay fit. `pass` is set by whichever experiment produced the series,
// according to that experiment's stated requirement (monotonicity, fit
// accuracy, boundedness, ...).
struct DecaySeries {
  std::string name;
  std::string parameter;  // name of the swept integer ("k" or "m")
  std::map<int, double> values;
  double fit_rate = 0.0;
  double fit_quality = 0.0;
  std::string window;
  bool pass = true;
  std::map<std::string, double> metadata;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double quality = 0.0;  // coefficient of determination
  int points = 0;        // entries that survived the floor
};

// Ordinary least squares of log(value) against the integer parameter,
// restricted to entries above the floor (log of numerical zero is
// meaningless). With fewer than two surviving points the slope is 0 and the
// quality is 1 when nothing survived (a flat, fully-explained series of
// zeros) and 0 otherwise.
FitResult log_linear_fit(const std::map<int, double>& values,
                         double floor = 1e-14);

// Convenience: stamp fit_rate / fit_quality onto a series from its values.
void apply_fit(DecaySeries& series, double floor = 1e-14);

}  // namespace qfock
