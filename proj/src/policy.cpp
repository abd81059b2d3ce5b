#include "sird/policy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sird/cost.hpp"
#include "sird/detail/rk4.hpp"
#include "sird/errors.hpp"

namespace sird {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void fill_thresholds(PolicyStep& step, const Costate& c, const ModelParams& p) {
  if (step.x.s > 0.0 && step.x.i > 0.0 && c.q != c.p) {
    const LockdownThresholds th = lockdown_thresholds(step.x, c, p);
    step.k1 = th.k1;
    step.k2 = th.k2;
    step.pressure = th.pressure;
  } else {
    step.k1 = kNan;
    step.k2 = kNan;
    step.pressure =
        step.x.s + step.x.i > 0.0 ? p.beta * step.x.s * step.x.i / (step.x.s + step.x.i)
                                  : 0.0;
  }
}

}  // namespace

FeedbackDecision feedback_law(const ValueField& field, const State& x,
                              const ModelParams& params) {
  const Costate c = finite_difference_costate(field, x);
  const Region region = classify(x, c, params);
  const MinimizerSet m = minimizer(x, c, params);
  return {m.full_interval ? 0.0 : m.value, region};
}

LockdownThresholds lockdown_thresholds(const State& x, const Costate& c,
                                       const ModelParams& params) {
  if (!(x.s > 0.0) || !(x.i > 0.0))
    throw std::domain_error("thresholds need an interior state");
  if (c.q == c.p) throw std::domain_error("thresholds undefined when q equals p");
  const double gap = c.q - c.p;
  return {params.w / (2.0 * params.theta * gap),
          params.w / (2.0 * params.theta * (1.0 - params.theta * params.l_bar) * gap),
          params.beta * x.s * x.i / (x.s + x.i)};
}

PolicyReport simulate_closed_loop(const ValueField& field, const State& x0,
                                  double horizon, double dt, const ModelParams& params) {
  params.validate();
  if (!x0.in_triangle()) throw std::domain_error("initial state outside the triangle");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  const double delta = params.discount();
  PolicyReport report;
  report.field_value_at_start = field(x0);

  std::array<double, 3> y{std::max(x0.s, 0.0), std::max(x0.i, 0.0), 0.0};
  double t = 0.0;
  const double eps = 1e-12 * std::max(1.0, horizon);
  while (true) {
    const State x{y[0], y[1]};
    const Costate c = finite_difference_costate(field, x);
    const FeedbackDecision decision = feedback_law(field, x, params);

    PolicyStep step;
    step.t = t;
    step.x = x;
    step.lockdown = decision.lockdown;
    step.region = decision.region;
    fill_thresholds(step, c, params);
    step.cost_rate = running_cost(x, decision.lockdown, params);
    step.cost_to_date = y[2];
    step.running_value = y[2] + std::exp(-delta * t) * field(x);
    report.steps.push_back(step);

    if (t >= horizon - eps) break;
    const double t_next = std::min(t + dt, horizon);
    y = detail::rk4_step<3>(
        y, t, t_next - t, [&](double tt, const std::array<double, 3>& v) {
          const double damp = 1.0 - params.theta * decision.lockdown;
          const double flux = params.beta * v[0] * v[1] * damp * damp;
          const double removal = (params.gamma + params.phi(v[1])) * v[1];
          const double rate = std::exp(-delta * tt) *
                              ((v[0] + v[1]) * decision.lockdown * params.w +
                               (params.w / params.r + params.chi) * v[1] * params.phi(v[1]));
          return std::array<double, 3>{-flux, flux - removal, rate};
        });
    if (y[0] < -kTriangleTol || y[1] < -kTriangleTol || y[0] + y[1] > 1.0 + kTriangleTol)
      throw StepError("closed-loop trajectory left the triangle; reduce dt");
    y[0] = std::max(y[0], 0.0);
    y[1] = std::max(y[1], 0.0);
    if (y[0] + y[1] > 1.0) {
      const double scale = 1.0 / (y[0] + y[1]);
      y[0] *= scale;
      y[1] *= scale;
    }
    t = t_next;
  }

  report.realized_cost = y[2] + std::exp(-delta * horizon) * field({y[0], y[1]});
  report.tail_bound =
      model_constants(params).cost_bound * std::exp(-delta * horizon) / delta;
  return report;
}

}  // namespace sird
