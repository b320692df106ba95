#pragma once

#include <stdexcept>
#include <string>

namespace spb {

// Bad user-facing configuration: unreachable confidence level, malformed
// config file, out-of-range argument.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal numeric failure: lost root bracket, iteration cap, empty
// acceptance region.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spb
