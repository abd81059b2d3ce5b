#pragma once

#include "sird/params.hpp"
#include "sird/state.hpp"

namespace sird {

struct Rates {
  double ds = 0.0;
  double di = 0.0;
};

/// Controlled infection vector field on the triangle.
/// Throws std::domain_error outside the triangle or control range.
Rates vector_field(const State& x, double lockdown, const ModelParams& params);

/// Fourth-order integration of the reduced (s,i) system with the control held
/// constant within its breakpoint intervals (steps split at breakpoints).
/// States are clamped back into the triangle when the violation is below the
/// clamping tolerance; larger violations throw StepError.
Trajectory integrate_forward(const State& x0, const ControlSignal& control,
                             double horizon, double dt, const ModelParams& params);

/// Same, for the four-compartment system; the compartment sum is conserved.
FullTrajectory integrate_full(const FullState& x0, const ControlSignal& control,
                              double horizon, double dt, const ModelParams& params);

/// Time-reversed run. `control` is indexed by backward elapsed time: control(u)
/// is the lockdown applied at time -u. Trajectory times hold the backward
/// elapsed time. Leaving the triangle is reported, not thrown: integration
/// stops at the last in-triangle sample and admissible = false.
struct BackwardRun {
  Trajectory path;
  bool admissible = true;
};

BackwardRun integrate_backward(const State& y0, const ControlSignal& control,
                               double duration, double dt, const ModelParams& params);

}  // namespace sird
