#include "qfock/serialize.hpp"

#include <fstream>
#include <sstream>

#include "qfock/errors.hpp"

namespace qfock {

namespace {

// Shortest round-trip decimal form, dot separator, locale-independent.
std::string number(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << value;
  return out.str();
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["max_residual"] = report.max_residual;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [level, residual] : report.per_level) {
    levels[std::to_string(level)] = residual;
  }
  j["per_level"] = levels;
  j["metadata"] = report.metadata;
  return j;
}

nlohmann::json to_json(const DecaySeries& series) {
  nlohmann::json j;
  j["name"] = series.name;
  j["parameter"] = series.parameter;
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : series.values) {
    values[std::to_string(k)] = v;
  }
  j["values"] = values;
  j["fit_rate"] = series.fit_rate;
  j["fit_quality"] = series.fit_quality;
  j["window"] = series.window;
  j["pass"] = series.pass;
  j["metadata"] = series.metadata;
  return j;
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  j["n"] = config.n;
  j["q_list"] = config.q_list;
  j["levels"] = config.N;
  j["suites"] = config.suites;
  j["k_max"] = config.k_max;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  j["tol_exact"] = config.tol_exact;
  j["tol_spectral"] = config.tol_spectral;
  return j;
}

std::string series_csv(const DecaySeries& series) {
  std::string out = series.parameter + ",value\n";
  for (const auto& [k, v] : series.values) {
    out += std::to_string(k) + "," + number(v) + "\n";
  }
  return out;
}

std::string matrix_csv(const DenseMatrix<double>& matrix) {
  std::string out;
  for (long c = 0; c < matrix.cols(); ++c) {
    out += (c == 0 ? "" : ",") + ("col_" + std::to_string(c));
  }
  out += "\n";
  for (long r = 0; r < matrix.rows(); ++r) {
    for (long c = 0; c < matrix.cols(); ++c) {
      out += (c == 0 ? "" : ",") + number(matrix(r, c));
    }
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace qfock
