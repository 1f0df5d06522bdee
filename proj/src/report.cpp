#include "qfock/report.hpp"

#include <cmath>
#include <vector>

namespace qfock {

FitResult log_linear_fit(const std::map<int, double>& values, double floor) {
  std::vector<double> xs, ys;
  for (const auto& [k, v] : values) {
    if (v > floor) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(v));
    }
  }
  FitResult fit;
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.quality = xs.empty() ? 1.0 : 0.0;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t t = 0; t < xs.size(); ++t) {
    mx += xs[t];
    my += ys[t];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t t = 0; t < xs.size(); ++t) {
    sxx += (xs[t] - mx) * (xs[t] - mx);
    sxy += (xs[t] - mx) * (ys[t] - my);
  }
  if (sxx <= 0) {
    fit.quality = 0.0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t t = 0; t < xs.size(); ++t) {
    const double pred = fit.intercept + fit.slope * xs[t];
    ss_res += (ys[t] - pred) * (ys[t] - pred);
    ss_tot += (ys[t] - my) * (ys[t] - my);
  }
  if (ss_tot < 1e-30) {
    fit.quality = ss_res < 1e-30 ? 1.0 : 0.0;
  } else {
    fit.quality = 1.0 - ss_res / ss_tot;
  }
  return fit;
}

void apply_fit(DecaySeries& series, double floor) {
  const FitResult fit = log_linear_fit(series.values, floor);
  series.fit_rate = fit.slope;
  series.fit_quality = fit.quality;
  series.metadata["fit_points"] = static_cast<double>(fit.points);
  series.metadata["fit_intercept"] = fit.intercept;
}

}  // namespace qfock
