#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

// Bad configuration file or CLI arguments (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: no root, degenerate data, non-convergence (exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Refusal to run a computation that would exceed enumeration caps (exit code 4).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace twinbeam
