#pragma once

#include <stdexcept>
#include <string>

namespace chainthermo {

/// Invalid chain parameters, scenario files or selectors. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigensolver failure or a non-finite intermediate. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fisher-information formula was evaluated at p = 0 or p = 1.
class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chainthermo
