#pragma once

#include <stdexcept>
#include <string>

namespace kfront {

// Malformed parameters supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical method failed to converge or hit a singular system.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A discrete invariant (positivity, bounds, conservation) was violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kfront
