#pragma once

#include <stdexcept>
#include <string>

namespace npcd {

// Input violates a documented precondition (bad matrix, out-of-range parameter).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Request exceeds an enumeration cap (DAG count, ordering count).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Parameters are individually valid but jointly infeasible (e.g. df <= 0).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace npcd
