#pragma once

#include <stdexcept>
#include <string>

namespace aerocov {

// Invalid configuration file, field value, or sweep request. CLI maps this
// to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergent integration, impossible bracketing,
// non-finite intermediate). CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Unwritable output path or failed file write. CLI maps this to exit
// code 4.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aerocov
