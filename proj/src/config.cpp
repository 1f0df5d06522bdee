#include "qfock/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qfock/errors.hpp"

namespace qfock {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value '" + value + "' for key '" +
                      key + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value '" + value + "' for key '" +
                      key + "'");
  }
}

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> suites = {
      "relations", "spectral", "asymptotic", "gauge", "gram-oracle",
      "halfpower"};
  return suites;
}

void apply_setting(RunConfig& config, const std::string& raw_key,
                   const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "n") {
    config.n = static_cast<int>(parse_int(key, value));
  } else if (key == "q" || key == "q_list") {
    config.q_list.clear();
    for (const auto& item : split_list(value)) {
      config.q_list.push_back(parse_double(key, item));
    }
  } else if (key == "levels" || key == "N") {
    config.N = static_cast<int>(parse_int(key, value));
  } else if (key == "suites") {
    config.suites = split_list(value);
  } else if (key == "k_max") {
    config.k_max = static_cast<int>(parse_int(key, value));
  } else if (key == "trials") {
    config.trials = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    config.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "out" || key == "output_dir") {
    config.output_dir = value;
  } else if (key == "tol_exact") {
    config.tol_exact = parse_double(key, value);
  } else if (key == "tol_spectral") {
    config.tol_spectral = parse_double(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  RunConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_number) +
                        " of '" + path + "' is not 'key = value'");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

void validate_config(const RunConfig& config) {
  if (config.n < 1) throw ConfigError("config: n must be >= 1");
  if (config.N < 2) throw ConfigError("config: levels must be >= 2");
  if (config.q_list.empty()) throw ConfigError("config: q list is empty");
  for (const double q : config.q_list) {
    if (!(std::abs(q) < 1.0) || !std::isfinite(q)) {
      throw ConfigError("config: every q must satisfy |q| < 1 (got " +
                        std::to_string(q) + ")");
    }
  }
  if (config.suites.empty()) throw ConfigError("config: suites is empty");
  const auto& known = known_suites();
  for (const auto& suite : config.suites) {
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
      std::string names;
      for (const auto& s : known) names += (names.empty() ? "" : ", ") + s;
      throw ConfigError("config: unknown suite '" + suite + "' (known: " +
                        names + ")");
    }
  }
  if (config.k_max < 0) throw ConfigError("config: k_max must be >= 0");
  if (config.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (config.output_dir.empty())
    throw ConfigError("config: output directory is empty");
  if (!(config.tol_exact > 0.0) || !(config.tol_spectral > 0.0)) {
    throw ConfigError("config: tolerances must be positive");
  }
}

}  // namespace qfock
