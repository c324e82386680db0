#pragma once

#include <stdexcept>
#include <string>

namespace sim {

// Error taxonomy used across the library. Commands translate these into a
// machine-readable stderr line and a nonzero exit code.

struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct BoundsError : std::out_of_range {
  explicit BoundsError(const std::string& msg) : std::out_of_range(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StateError : std::runtime_error {
  explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sim
