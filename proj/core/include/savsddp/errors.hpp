#pragma once

#include <stdexcept>
#include <string>

namespace savsddp {

/// Malformed input (dangling indices, inverted bounds, bad dimensions).
/// Distinct from an Infeasible solve status: a problem that fails validation
/// never reaches the solver.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file problems; the message carries the offending key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Hard failures inside the training loop (infeasible or unbounded subproblem,
/// which indicate a broken recourse structure rather than a user error).
class SddpError : public std::runtime_error {
 public:
  explicit SddpError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace savsddp
