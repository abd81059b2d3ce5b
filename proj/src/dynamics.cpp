#include "sird/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sird/detail/rk4.hpp"
#include "sird/errors.hpp"

namespace sird {

namespace {

void check_domain(const State& x, double lockdown, const ModelParams& p) {
  if (!x.in_triangle())
    throw std::domain_error("state (" + std::to_string(x.s) + ", " + std::to_string(x.i) +
                            ") is outside the state triangle");
  if (lockdown < -1e-12 || lockdown > p.l_bar + 1e-12)
    throw std::domain_error("lockdown level " + std::to_string(lockdown) +
                            " is outside [0, l_bar]");
}

std::array<double, 2> raw_rates(const std::array<double, 2>& x, double l,
                                const ModelParams& p) {
  const double damp = 1.0 - p.theta * l;
  const double flux = p.beta * x[0] * x[1] * damp * damp;
  const double removal = (p.gamma + p.phi(x[1])) * x[1];
  return {-flux, flux - removal};
}

/// Clamp a state back into the triangle. Returns false when the violation
/// exceeds the tolerance.
bool clamp_into_triangle(double& s, double& i, double tol) {
  if (s < -tol || i < -tol || s + i > 1.0 + tol) return false;
  s = std::max(s, 0.0);
  i = std::max(i, 0.0);
  const double sum = s + i;
  if (sum > 1.0) {
    s /= sum;
    i /= sum;
  }
  return true;
}

/// Advance t to horizon in steps of at most dt, splitting at control
/// breakpoints. step(t0, t1, level) integrates one sub-interval.
template <class StepFn>
void march(double horizon, double dt, const ControlSignal& control, StepFn&& step) {
  const double eps = 1e-12 * std::max(1.0, horizon);
  double t = 0.0;
  while (t < horizon - eps) {
    double t_next = std::min(t + dt, horizon);
    const double bp = control.next_breakpoint_after(t);
    if (bp < t_next - eps) t_next = bp;
    step(t, t_next, control(t));
    t = t_next;
  }
}

}  // namespace

Rates vector_field(const State& x, double lockdown, const ModelParams& params) {
  check_domain(x, lockdown, params);
  const auto rates = raw_rates({x.s, x.i}, lockdown, params);
  return {rates[0], rates[1]};
}

Trajectory integrate_forward(const State& x0, const ControlSignal& control,
                             double horizon, double dt, const ModelParams& params) {
  params.validate();
  control.validate(params.l_bar);
  if (!x0.in_triangle()) throw std::domain_error("initial state outside the triangle");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  Trajectory out;
  out.times.push_back(0.0);
  out.states.push_back(x0);
  out.controls.push_back(control(0.0));

  std::array<double, 2> y{std::max(x0.s, 0.0), std::max(x0.i, 0.0)};
  march(horizon, dt, control, [&](double t, double t_next, double level) {
    const double sum_before = y[0] + y[1];
    y = detail::rk4_step<2>(y, t, t_next - t,
                            [&](double, const std::array<double, 2>& v) {
                              return raw_rates(v, level, params);
                            });
    if (!clamp_into_triangle(y[0], y[1], kTriangleTol))
      throw StepError("trajectory left the state triangle at t=" + std::to_string(t_next) +
                      "; reduce dt");
    if (y[0] + y[1] > sum_before + 1e-12)
      throw StepError("s+i increased along a forward step; reduce dt");
    out.times.push_back(t_next);
    out.states.push_back({y[0], y[1]});
    out.controls.push_back(control(t_next));
  });
  return out;
}

FullTrajectory integrate_full(const FullState& x0, const ControlSignal& control,
                              double horizon, double dt, const ModelParams& params) {
  params.validate();
  control.validate(params.l_bar);
  if (!x0.on_simplex())
    throw std::domain_error("initial state is not on the unit simplex");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  FullTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(x0);
  out.controls.push_back(control(0.0));

  std::array<double, 4> y{x0.s, x0.i, x0.r_frac, x0.d};
  march(horizon, dt, control, [&](double t, double t_next, double level) {
    y = detail::rk4_step<4>(y, t, t_next - t,
                            [&](double, const std::array<double, 4>& v) {
                              const auto si = raw_rates({v[0], v[1]}, level, params);
                              const double deaths = v[1] * params.phi(v[1]);
                              return std::array<double, 4>{si[0], si[1],
                                                           params.gamma * v[1], deaths};
                            });
    if (!clamp_into_triangle(y[0], y[1], kTriangleTol))
      throw StepError("trajectory left the state triangle at t=" + std::to_string(t_next) +
                      "; reduce dt");
    out.times.push_back(t_next);
    out.states.push_back({y[0], y[1], y[2], y[3]});
    out.controls.push_back(control(t_next));
  });
  return out;
}

BackwardRun integrate_backward(const State& y0, const ControlSignal& control,
                               double duration, double dt, const ModelParams& params) {
  params.validate();
  control.validate(params.l_bar);
  if (!y0.in_triangle()) throw std::domain_error("initial state outside the triangle");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");

  BackwardRun run;
  run.path.times.push_back(0.0);
  run.path.states.push_back(y0);
  run.path.controls.push_back(control(0.0));

  std::array<double, 2> y{std::max(y0.s, 0.0), std::max(y0.i, 0.0)};
  march(duration, dt, control, [&](double u, double u_next, double level) {
    if (!run.admissible) return;
    auto next = detail::rk4_step<2>(y, u, u_next - u,
                                    [&](double, const std::array<double, 2>& v) {
                                      auto f = raw_rates(v, level, params);
                                      return std::array<double, 2>{-f[0], -f[1]};
                                    });
    if (!clamp_into_triangle(next[0], next[1], kTriangleTol)) {
      run.admissible = false;  // exit resolved at step granularity
      return;
    }
    y = next;
    run.path.times.push_back(u_next);
    run.path.states.push_back({y[0], y[1]});
    run.path.controls.push_back(control(u_next));
  });
  return run;
}

}  // namespace sird
