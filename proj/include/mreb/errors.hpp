#pragma once

#include <stdexcept>
#include <string>

namespace mreb {

/// Invalid or inconsistent input data: parse failures, dimension mismatches,
/// non-finite entries, domain violations in loaded files.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: rank deficiency, indefinite systems, non-finite results.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed configuration file or option set.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mreb
