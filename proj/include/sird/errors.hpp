#pragma once

#include <stdexcept>
#include <string>

namespace sird {

/// Membership tolerance for the state triangle. Violations below this level
/// are treated as rounding noise and clamped; larger ones are errors.
constexpr double kTriangleTol = 1e-10;

/// A trajectory or characteristic foot left the state triangle by more than
/// the clamping tolerance. Usually means the time step is too large.
class StepError : public std::runtime_error {
 public:
  explicit StepError(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-point iteration exhausted max_iter before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// Configuration problem, with the offending line number when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")"
                                    : what),
        line(line) {}
  int line;
};

}  // namespace sird
