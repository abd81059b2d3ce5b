#pragma once

#include <vector>

#include "sird/errors.hpp"

namespace sird {

/// Point of the state triangle {s,i >= 0, s+i <= 1}.
struct State {
  double s = 0.0;
  double i = 0.0;
  bool in_triangle(double tol = kTriangleTol) const {
    return s >= -tol && i >= -tol && s + i <= 1.0 + tol;
  }
};

/// Point of the four-compartment simplex {s+i+r+d = 1}.
struct FullState {
  double s = 0.0;
  double i = 0.0;
  double r_frac = 0.0;
  double d = 0.0;
  bool on_simplex(double tol = 1e-12) const;
  State reduced() const { return {s, i}; }
};

/// Piecewise-constant lockdown path. values[k] applies on the right-open
/// interval [breakpoints[k], breakpoints[k+1]); the last value extends to
/// +infinity. breakpoints[0] == 0.
class ControlSignal {
 public:
  ControlSignal() : breakpoints_{0.0}, values_{0.0} {}
  ControlSignal(std::vector<double> breakpoints, std::vector<double> values);
  static ControlSignal constant(double level);

  double operator()(double t) const;
  double next_breakpoint_after(double t) const;  // +inf when none
  void validate(double l_bar) const;             // all values within [0, l_bar]

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  /// Exact integral of |L - other| over [0, t].
  double integral_abs_diff(const ControlSignal& other, double t) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> controls;  // lockdown applied on [times[k], times[k+1])
};

struct FullTrajectory {
  std::vector<double> times;
  std::vector<FullState> states;
  std::vector<double> controls;
};

}  // namespace sird
