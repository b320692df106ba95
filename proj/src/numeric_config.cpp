#include "spb/numeric_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "spb/errors.hpp"

namespace spb {

double NumericConfig::theta_step_for(double b) const {
  if (theta_step) return *theta_step;
  return 0.005 * (1.0 + b);
}

double NumericConfig::theta_max_for(double b, int n) const {
  if (theta_max) return *theta_max;
  return b + double(n) + 10.0 * std::sqrt(b + double(n)) + 10.0;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_positive(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw config_error("config: bad value for " + key + ": '" + value + "'");
  }
  if (pos != value.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw config_error("config: " + key + " must be a positive number, got '" +
                       value + "'");
  }
  return v;
}

}  // namespace

NumericConfig parse_config(std::istream& in) {
  NumericConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config: line " + std::to_string(lineno) +
                         " is not of the form key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "series_eps") {
      cfg.series_eps = parse_positive(key, value);
    } else if (key == "mse_eps") {
      cfg.mse_eps = parse_positive(key, value);
    } else if (key == "k_max_eps") {
      cfg.k_max_eps = parse_positive(key, value);
    } else if (key == "bisect_tol") {
      cfg.bisect_tol = parse_positive(key, value);
    } else if (key == "opt_tol") {
      cfg.opt_tol = parse_positive(key, value);
    } else if (key == "root_tol") {
      cfg.root_tol = parse_positive(key, value);
    } else if (key == "theta_step") {
      cfg.theta_step = parse_positive(key, value);
    } else if (key == "theta_max") {
      cfg.theta_max = parse_positive(key, value);
    } else if (key == "strict_paper_qpmf") {
      if (value == "true" || value == "1") {
        cfg.strict_paper_qpmf = true;
      } else if (value == "false" || value == "0") {
        cfg.strict_paper_qpmf = false;
      } else {
        throw config_error("config: strict_paper_qpmf must be true/false");
      }
    } else {
      throw config_error("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

NumericConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace spb
