#pragma once
#include <stdexcept>
#include <string>

namespace scurnn {

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when NaN/Inf appears in a hidden state or gradient. Carries the
// timestep where the fault was detected.
struct NumericFault : std::runtime_error {
  NumericFault(const std::string& what, int timestep_)
      : std::runtime_error(what), timestep(timestep_) {}
  int timestep;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scurnn
