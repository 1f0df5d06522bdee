#pragma once

#include <string>

#include "json.hpp"
#include "qfock/config.hpp"
#include "qfock/gram.hpp"
#include "qfock/report.hpp"

namespace qfock {

// JSON encodings (keys sorted: nlohmann's default object is key-ordered).
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const DecaySeries& series);
nlohmann::json to_json(const RunConfig& config);

// CSV encodings: comma separated, dot decimal, header row.
std::string series_csv(const DecaySeries& series);
std::string matrix_csv(const DenseMatrix<double>& matrix);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace qfock
