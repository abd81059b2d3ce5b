#include "sird/cost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sird/detail/rk4.hpp"
#include "sird/errors.hpp"

namespace sird {

namespace {

double raw_cost(double s, double i, double l, const ModelParams& p) {
  return (s + i) * l * p.w + (p.w / p.r + p.chi) * i * p.phi(i);
}

/// Advance t to horizon in steps of at most dt, splitting at control
/// breakpoints (same stepping as the integrators).
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

/// Piecewise-cubic sampler for an accumulated path quantity whose exact
/// derivative is known at every sample.
struct HermitePath {
  std::vector<double> t, y, dy;

  void push(double ti, double yi, double di) {
    t.push_back(ti);
    y.push_back(yi);
    dy.push_back(di);
  }

  double operator()(double tau) const {
    if (tau <= t.front()) return y.front();
    if (tau >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tau);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double u = (tau - t[k]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y[k] + (u3 - 2 * u2 + u) * h * dy[k] +
           (-2 * u3 + 3 * u2) * y[k + 1] + (u3 - u2) * h * dy[k + 1];
  }
};

template <class F>
double adaptive_simpson(F&& f, double a, double fa, double b, double fb, double fm,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, b, fb, fm, whole, tol, 24);
}

}  // namespace

double running_cost(const State& x, double lockdown, const ModelParams& params) {
  if (!x.in_triangle())
    throw std::domain_error("state outside the triangle in running_cost");
  if (lockdown < -1e-12 || lockdown > params.l_bar + 1e-12)
    throw std::domain_error("lockdown level outside [0, l_bar] in running_cost");
  return raw_cost(x.s, x.i, lockdown, params);
}

CostValue evaluate_cost(const State& x0, const ControlSignal& control,
                        const ModelParams& params, double rel_tol, double dt) {
  params.validate();
  control.validate(params.l_bar);
  if (!x0.in_triangle()) throw std::domain_error("initial state outside the triangle");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");

  const double delta = params.discount();
  const double cost_bound = model_constants(params).cost_bound;
  const double eps = rel_tol * params.w / params.r;
  // Tail of the discounted integral past T is at most cost_bound*e^{-delta T}/delta.
  double horizon = dt;
  if (cost_bound > delta * eps)
    horizon = std::max(dt, std::log(cost_bound / (delta * eps)) / delta);

  std::array<double, 3> y{std::max(x0.s, 0.0), std::max(x0.i, 0.0), 0.0};
  march(horizon, dt, control, [&](double t, double t_next, double level) {
    y = detail::rk4_step<3>(y, t, t_next - t,
                            [&](double tt, const std::array<double, 3>& v) {
                              const double damp = 1.0 - params.theta * level;
                              const double flux = params.beta * v[0] * v[1] * damp * damp;
                              const double removal = (params.gamma + params.phi(v[1])) * v[1];
                              const double rate =
                                  std::exp(-delta * tt) * raw_cost(v[0], v[1], level, params);
                              return std::array<double, 3>{-flux, flux - removal, rate};
                            });
  });
  return {y[2], horizon};
}

double evaluate_output_objective(const FullState& x0, const ControlSignal& control,
                                 const ModelParams& params, double rel_tol, double dt) {
  params.validate();
  control.validate(params.l_bar);
  if (!x0.on_simplex()) throw std::domain_error("initial state is not on the unit simplex");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");

  const double eps = rel_tol * params.w / params.r;
  // Past T the inner integral and the death count are frozen analytically; the
  // induced error decays like e^{-(r+nu)T} with the constant below.
  const double freeze_const = (2.0 * params.w + params.chi * params.gamma) / params.r;
  const double horizon =
      std::max(4.0 * dt, std::log(freeze_const / (0.25 * eps)) / params.discount());

  // One sweep of the four-compartment system, accumulating the inner
  // discounted-output integral G alongside.
  HermitePath output_integral;  // G(tau)
  HermitePath deaths;           // D(tau)
  const auto inner_rate = [&](double t, double s, double i, double d, double level) {
    return std::exp(-params.r * t) *
           ((1.0 - d - (s + i) * level) * params.w - params.chi * i * params.phi(i));
  };
  std::array<double, 5> y{x0.s, x0.i, x0.r_frac, x0.d, 0.0};
  output_integral.push(0.0, 0.0, inner_rate(0.0, y[0], y[1], y[3], control(0.0)));
  deaths.push(0.0, y[3], y[1] * params.phi(y[1]));
  march(horizon, dt, control, [&](double t, double t_next, double level) {
    y = detail::rk4_step<5>(
        y, t, t_next - t, [&](double tt, const std::array<double, 5>& v) {
          const double damp = 1.0 - params.theta * level;
          const double flux = params.beta * v[0] * v[1] * damp * damp;
          const double removal = (params.gamma + params.phi(v[1])) * v[1];
          return std::array<double, 5>{-flux, flux - removal, params.gamma * v[1],
                                       v[1] * params.phi(v[1]),
                                       inner_rate(tt, v[0], v[1], v[3], level)};
        });
    output_integral.push(t_next, y[4], inner_rate(t_next, y[0], y[1], y[3], control(t_next)));
    deaths.push(t_next, y[3], y[1] * params.phi(y[1]));
  });

  // Outer integral over the arrival-time density.
  const auto integrand = [&](double tau) {
    return params.nu * std::exp(-params.nu * tau) *
           (output_integral(tau) +
            std::exp(-params.r * tau) * (1.0 - deaths(tau)) * params.w / params.r);
  };
  std::vector<double> edges{0.0};
  for (double bp : control.breakpoints())
    if (bp > 0.0 && bp < horizon) edges.push_back(bp);
  for (int k = 1; k < 64; ++k) edges.push_back(horizon * k / 64.0);
  edges.push_back(horizon);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  double value = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double len = edges[k + 1] - edges[k];
    value += integrate_adaptive(integrand, edges[k], edges[k + 1],
                                0.25 * eps * len / horizon);
  }
  // Frozen continuation past the truncation horizon.
  value += std::exp(-params.nu * horizon) * output_integral(horizon);
  value += (1.0 - deaths(horizon)) * (params.w / params.r) *
           (params.nu / params.discount()) * std::exp(-params.discount() * horizon);
  return value;
}

}  // namespace sird
