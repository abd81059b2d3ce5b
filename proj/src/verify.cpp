#include "sird/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "sird/cost.hpp"
#include "sird/csv.hpp"
#include "sird/detail/rk4.hpp"
#include "sird/dynamics.hpp"
#include "sird/hjb_solver.hpp"
#include "sird/policy.hpp"

namespace sird {

namespace {

/// Portable uniform sampler; keeps reports byte-identical for a fixed seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  State triangle() {
    double a = uniform(), b = uniform();
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    return {a, b};
  }
  State interior(double margin) {
    while (true) {
      const State x = triangle();
      if (x.s >= margin && x.i >= margin && x.s + x.i <= 1.0 - margin) return x;
    }
  }
  ControlSignal control(double l_bar, int segments, double horizon) {
    std::vector<double> breakpoints{0.0};
    for (int k = 1; k < segments; ++k) breakpoints.push_back(uniform(0.0, horizon));
    std::sort(breakpoints.begin() + 1, breakpoints.end());
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
      if (breakpoints[k] <= breakpoints[k - 1]) breakpoints[k] = breakpoints[k - 1] + 1e-6;
    std::vector<double> values;
    values.reserve(breakpoints.size());
    for (std::size_t k = 0; k < breakpoints.size(); ++k)
      values.push_back(uniform(0.0, l_bar));
    return ControlSignal(std::move(breakpoints), std::move(values));
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t suite_seed(std::uint64_t base, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h ^ base;
}

SuiteResult make_result(std::string name, long samples, double violation, double tolerance,
                        std::uint64_t seed, std::string note = {}) {
  SuiteResult out;
  out.name = std::move(name);
  out.samples = samples;
  out.max_violation = violation;
  out.tolerance = tolerance;
  out.pass = violation <= tolerance;
  out.seed = seed;
  out.note = std::move(note);
  return out;
}

double norm2(double a, double b) { return std::sqrt(a * a + b * b); }

State state_at(const Trajectory& trajectory, double t) {
  const auto& times = trajectory.times;
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return trajectory.states.front();
  if (it == times.end()) return trajectory.states.back();
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  const double wgt = (t - times[k]) / (times[k + 1] - times[k]);
  const State& a = trajectory.states[k];
  const State& b = trajectory.states[k + 1];
  return {a.s + wgt * (b.s - a.s), a.i + wgt * (b.i - a.i)};
}

// ---------------------------------------------------------------------------
// dynamics suites

std::vector<SuiteResult> suite_dynamics_invariance(const ModelParams& p, int trials,
                                                   std::uint64_t seed) {
  Sampler smp(seed);
  double worst_outside = -1.0;
  double worst_increase = -1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const State x0 = smp.triangle();
    const ControlSignal control = smp.control(p.l_bar, 4, 10.0);
    const Trajectory traj = integrate_forward(x0, control, 10.0, 0.01, p);
    double prev_sum = traj.states.front().s + traj.states.front().i;
    for (const State& x : traj.states) {
      worst_outside = std::max({worst_outside, -x.s, -x.i, x.s + x.i - 1.0});
      const double sum = x.s + x.i;
      worst_increase = std::max(worst_increase, sum - prev_sum);
      prev_sum = sum;
    }
  }
  return {make_result("dynamics.invariance", trials, worst_outside, 1e-10, seed),
          make_result("dynamics.monotone_population", trials, worst_increase, 1e-12, seed)};
}

std::vector<SuiteResult> suite_field_bound_lipschitz(const ModelParams& p,
                                                     long bound_samples,
                                                     long lipschitz_samples,
                                                     std::uint64_t seed) {
  const ModelConstants consts = model_constants(p);
  Sampler smp(seed);
  double worst_bound = -consts.field_bound;
  for (long k = 0; k < bound_samples; ++k) {
    const State x = smp.triangle();
    const double l = smp.uniform(0.0, p.l_bar);
    const Rates b = vector_field(x, l, p);
    worst_bound = std::max(worst_bound, norm2(b.ds, b.di) - consts.field_bound);
  }
  double worst_lip = -1.0;
  for (long k = 0; k < lipschitz_samples; ++k) {
    const State x = smp.triangle();
    const State y = smp.triangle();
    const double l = smp.uniform(0.0, p.l_bar);
    const Rates bx = vector_field(x, l, p);
    const Rates by = vector_field(y, l, p);
    worst_lip = std::max(worst_lip, norm2(bx.ds - by.ds, bx.di - by.di) -
                                        consts.field_lipschitz * norm2(x.s - y.s, x.i - y.i));
  }
  return {make_result("dynamics.field_bound", bound_samples, worst_bound, 0.0, seed),
          make_result("dynamics.field_lipschitz", lipschitz_samples, worst_lip, 0.0, seed)};
}

SuiteResult suite_backward_consistency(const ModelParams& p, int trials,
                                       std::uint64_t seed) {
  Sampler smp(seed);
  double worst = 0.0;
  int skipped = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const State y0 = smp.triangle();
    const double duration = smp.uniform(0.5, 4.0);
    const ControlSignal backward_control = smp.control(p.l_bar, 2, duration);
    const BackwardRun run = integrate_backward(y0, backward_control, duration, 0.005, p);
    if (!run.admissible) {
      ++skipped;
      continue;
    }
    // Reflect the control: forward time t corresponds to backward elapsed
    // duration - t.
    const auto& bp = backward_control.breakpoints();
    const auto& vals = backward_control.values();
    std::vector<double> fwd_bp{0.0};
    std::vector<double> fwd_vals{vals.back()};
    for (std::size_t k = bp.size() - 1; k >= 1; --k) {
      const double flip = duration - bp[k];
      if (flip > 0.0 && flip < duration) {
        fwd_bp.push_back(flip);
        fwd_vals.push_back(vals[k - 1]);
      }
    }
    const ControlSignal forward_control(std::move(fwd_bp), std::move(fwd_vals));
    const State start = run.path.states.back();
    const Trajectory fwd = integrate_forward(start, forward_control, duration, 0.005, p);
    const State end = fwd.states.back();
    worst = std::max(worst, norm2(end.s - y0.s, end.i - y0.i));
  }
  return make_result("dynamics.backward_consistency", trials, worst, 1e-6, seed,
                     "skipped=" + std::to_string(skipped));
}

// ---------------------------------------------------------------------------
// cost suites

std::vector<SuiteResult> suite_cost_bounds_monotone(const ModelParams& p, int trials,
                                                    std::uint64_t seed) {
  const double cap = model_constants(p).cost_bound / p.discount();
  Sampler smp(seed);
  double worst_bound = -1.0;
  double worst_chi = -1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const State x0 = smp.triangle();
    const ControlSignal control = smp.control(p.l_bar, 3, 10.0);
    const double value = evaluate_cost(x0, control, p, 1e-6).value;
    worst_bound = std::max({worst_bound, -value, value - cap});
    ModelParams lo = p, hi = p;
    lo.chi = smp.uniform(0.1 * p.chi, p.chi);
    hi.chi = lo.chi + smp.uniform(0.0, p.chi);
    worst_chi = std::max(worst_chi, evaluate_cost(x0, control, lo, 1e-6).value -
                                        evaluate_cost(x0, control, hi, 1e-6).value);
  }
  return {make_result("cost.bounds", trials, worst_bound, 1e-9, seed),
          make_result("cost.chi_monotone", trials, worst_chi, 1e-12, seed)};
}

SuiteResult suite_cost_lipschitz(const ModelParams& p, long samples, std::uint64_t seed) {
  const double lip = model_constants(p).cost_lipschitz;
  Sampler smp(seed);
  double worst = -1.0;
  for (long k = 0; k < samples; ++k) {
    const State x = smp.triangle();
    const State y = smp.triangle();
    const double l = smp.uniform(0.0, p.l_bar);
    worst = std::max(worst, std::abs(running_cost(x, l, p) - running_cost(y, l, p)) -
                                lip * norm2(x.s - y.s, x.i - y.i));
  }
  return make_result("cost.lipschitz", samples, worst, 0.0, seed);
}

// ---------------------------------------------------------------------------
// hamiltonian suites

Costate sample_costate(Sampler& smp) {
  return {smp.uniform(-25.0, 25.0), smp.uniform(-25.0, 25.0)};
}

/// Mix in boundary cases the uniform draw would never hit exactly.
State sample_state_with_edges(Sampler& smp) {
  const double roll = smp.uniform();
  State x = smp.triangle();
  if (roll < 0.05) x.i = 0.0;
  else if (roll < 0.10) x.s = 0.0;
  else if (roll < 0.12) x = {0.0, 0.0};
  return x;
}

SuiteResult suite_partition(const ModelParams& p, long samples, std::uint64_t seed) {
  Sampler smp(seed);
  long bad = 0;
  for (long k = 0; k < samples; ++k) {
    const State x = sample_state_with_edges(smp);
    Costate c = sample_costate(smp);
    if (smp.uniform() < 0.05) c.q = c.p;
    // Independent predicates straight from the region definitions.
    const bool in_both = x.s != 0.0 && x.i != 0.0;
    int hits = 0;
    hits += x.i == 0.0;
    hits += x.s == 0.0 && x.i != 0.0;
    hits += in_both && c.p == c.q;
    hits += in_both && c.q < c.p;
    if (in_both && c.q > c.p) {
      const double pressure = p.beta * x.s * x.i / (x.s + x.i);
      const double k1 = p.w / (2.0 * p.theta * (c.q - c.p));
      const double k2 = p.w / (2.0 * p.theta * (1.0 - p.theta * p.l_bar) * (c.q - c.p));
      hits += pressure <= k1;
      hits += k1 < pressure && pressure < k2;
      hits += pressure >= k2;
    }
    if (hits != 1) ++bad;
    // classify must agree with the unique predicate.
    classify(x, c, p);
  }
  return make_result("hamiltonian.partition", samples, static_cast<double>(bad), 0.0, seed);
}

std::vector<SuiteResult> suite_oracle(const ModelParams& p, long samples, int grid_points,
                                      std::uint64_t seed) {
  Sampler smp(seed);
  const double cell = p.l_bar / (grid_points - 1);
  double worst_value = 0.0;
  double worst_cell = 0.0;
  double worst_min = 0.0;
  for (long k = 0; k < samples; ++k) {
    const State x = sample_state_with_edges(smp);
    const Costate c = sample_costate(smp);
    const GridMin oracle = oracle_hamiltonian(x, c, p, grid_points);
    const double closed_form = hamiltonian(x, c, p);
    worst_value = std::max(worst_value, std::abs(closed_form - oracle.value));
    const MinimizerSet psi = minimizer(x, c, p);
    if (!psi.full_interval) {
      worst_cell = std::max(worst_cell, std::abs(psi.value - oracle.argmin));
      worst_min = std::max(worst_min,
                           std::abs(current_value_hamiltonian(x, c, psi.value, p) -
                                    closed_form));
    }
  }
  return {
      make_result("hamiltonian.oracle", samples, worst_value, 1e-6, seed),
      make_result("hamiltonian.minimizer_cell", samples, worst_cell, cell * (1.0 + 1e-9),
                  seed),
      make_result("hamiltonian.minimizer_value", samples, worst_min, 1e-10, seed),
  };
}

SuiteResult suite_concavity(const ModelParams& p, long samples, std::uint64_t seed) {
  Sampler smp(seed);
  double worst = -1.0;
  for (long k = 0; k < samples; ++k) {
    const State x = sample_state_with_edges(smp);
    const Costate c1 = sample_costate(smp);
    const Costate c2 = sample_costate(smp);
    const double lambda = smp.uniform();
    const Costate mix{lambda * c1.p + (1.0 - lambda) * c2.p,
                      lambda * c1.q + (1.0 - lambda) * c2.q};
    worst = std::max(worst, lambda * hamiltonian(x, c1, p) +
                                (1.0 - lambda) * hamiltonian(x, c2, p) -
                                hamiltonian(x, mix, p));
  }
  return make_result("hamiltonian.concavity", samples, worst, 1e-10, seed);
}

SuiteResult suite_boundary_continuity(const ModelParams& p, long samples,
                                      std::uint64_t seed) {
  Sampler smp(seed);
  double worst = 0.0;
  for (long k = 0; k < samples; ++k) {
    const State x = smp.interior(0.02);
    const double pressure = p.beta * x.s * x.i / (x.s + x.i);
    const double pvalue = smp.uniform(-10.0, 10.0);
    const double gap23 = p.w / (2.0 * p.theta * pressure);
    const double gap34 = p.w / (2.0 * p.theta * (1.0 - p.theta * p.l_bar) * pressure);
    for (double gap : {gap23, gap34}) {
      const double q = pvalue + gap;
      const double below = hamiltonian(x, {pvalue, q - 1e-8}, p);
      const double above = hamiltonian(x, {pvalue, q + 1e-8}, p);
      worst = std::max(worst, std::abs(above - below));
    }
  }
  return make_result("hamiltonian.boundary_continuity", samples, worst, 1e-6, seed);
}

// ---------------------------------------------------------------------------
// field suites

std::vector<SuiteResult> suite_field_basics(const ValueField& field, const ModelParams& p,
                                            std::uint64_t seed) {
  const double cap = model_constants(p).cost_bound / p.discount();
  const int n = field.grid.subdivisions();
  double worst_bound = -1.0;
  for (double v : field.values) worst_bound = std::max({worst_bound, -v, v - cap});
  double worst_edge = 0.0;
  for (int j = 0; j <= n; ++j)
    worst_edge = std::max(worst_edge,
                          std::abs(field.values[field.grid.node_index(j, 0)]));
  double worst_mono = -1.0;
  for (int k = 0; k + 1 <= n; ++k)
    worst_mono = std::max(worst_mono, field.values[field.grid.node_index(0, k)] -
                                          field.values[field.grid.node_index(0, k + 1)]);
  return {
      make_result("hjb.value_bounds", static_cast<long>(field.values.size()), worst_bound,
                  1e-9, seed),
      make_result("hjb.edge_values", n + 1, worst_edge, field.info.tol, seed),
      make_result("hjb.monotone_edge", n, worst_mono,
                  std::max(10.0 * field.info.tol, 1e-9), seed),
  };
}

std::vector<SuiteResult> suite_fixed_point_contraction(const ValueField& field,
                                                       const ModelParams& p,
                                                       std::uint64_t seed) {
  const double contraction = std::exp(-p.discount() * field.info.dt);
  const double threshold = field.info.tol * (1.0 - contraction);
  const SweepResult sweep =
      bellman_update(field, p, field.info.dt, field.info.control_grid);
  double worst_ratio = -1.0;
  long counted = 0;
  const auto& history = field.info.residual_history;
  for (std::size_t k = 20; k + 1 < history.size(); ++k) {
    if (history[k] <= 100.0 * threshold) break;
    worst_ratio = std::max(worst_ratio, history[k + 1] / history[k] - (contraction + 0.05));
    ++counted;
  }
  return {
      make_result("hjb.fixed_point", static_cast<long>(field.values.size()), sweep.residual,
                  10.0 * threshold, seed),
      make_result("hjb.contraction", counted, worst_ratio, 0.0, seed,
                  history.empty() ? "no history" : ""),
  };
}

SuiteResult suite_field_lipschitz(const ValueField& field, const ModelParams& p,
                                  std::uint64_t seed) {
  const ModelConstants consts = model_constants(p);
  const int n = field.grid.subdivisions();
  const double h = field.grid.spacing();
  const double slack = p.discount() - consts.field_lipschitz;
  const double bound = consts.cost_lipschitz / slack + 10.0 * h * consts.cost_lipschitz;
  const auto value = [&](int j, int k) { return field.values[field.grid.node_index(j, k)]; };
  double steepest = 0.0;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j + 1 <= n - k; ++j)
      steepest = std::max(steepest, std::abs(value(j + 1, k) - value(j, k)) / h);
  for (int k = 0; k + 1 <= n; ++k)
    for (int j = 0; j <= n - k - 1; ++j)
      steepest = std::max(steepest, std::abs(value(j, k + 1) - value(j, k)) / h);
  return make_result("hjb.lipschitz", static_cast<long>(field.values.size()),
                     steepest - bound, 0.0, seed,
                     "discount=" + format_g12(p.discount()));
}

// Forward value of a constant control over [0, horizon], one shot of the
// dynamic-programming right-hand side.
double dpp_forward_value(const ValueField& field, const ModelParams& p, const State& x,
                         double level, double horizon) {
  const double delta = p.discount();
  std::array<double, 3> y{x.s, x.i, 0.0};
  const int steps = 20;
  const double h = horizon / steps;
  for (int step = 0; step < steps; ++step) {
    const double t0 = step * h;
    y = detail::rk4_step<3>(y, t0, h, [&](double tt, const std::array<double, 3>& v) {
      const double damp = 1.0 - p.theta * level;
      const double flux = p.beta * v[0] * v[1] * damp * damp;
      const double removal = (p.gamma + p.phi(v[1])) * v[1];
      const double rate = std::exp(-delta * tt) *
                          ((v[0] + v[1]) * level * p.w +
                           (p.w / p.r + p.chi) * v[1] * p.phi(v[1]));
      return std::array<double, 3>{-flux, flux - removal, rate};
    });
  }
  return y[2] + std::exp(-delta * horizon) * field({y[0], y[1]});
}

}  // namespace

GridMin oracle_hamiltonian(const State& x, const Costate& c, const ModelParams& params,
                           int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("oracle grid needs at least 2 points");
  if (!x.in_triangle()) throw std::domain_error("state outside the triangle");
  // Direct evaluation of the defining expression, factored once per call.
  const double phi_i = params.phi(x.i);
  const double fixed = x.i * phi_i * (params.w / params.r + params.chi) -
                       (params.gamma + phi_i) * x.i * c.q;
  const double interaction = params.beta * x.s * x.i * (c.q - c.p);
  const double lockdown_cost = (x.s + x.i) * params.w;
  const double step = params.l_bar / (grid_points - 1);
  double best = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    const double level = g * step;
    const double damp = 1.0 - params.theta * level;
    const double value = lockdown_cost * level + damp * damp * interaction + fixed;
    if (value < best) {
      best = value;
      arg = level;
    }
  }
  return {best, arg};
}

bool SuiteReport::all_pass() const {
  for (const SuiteResult& suite : suites)
    if (!suite.pass) return false;
  return true;
}

void VerifyOptions::validate() const {
  const long counts[] = {bound_samples,     lipschitz_samples, partition_samples,
                         oracle_samples,    concavity_samples, boundary_samples,
                         invariance_trials, gronwall_trials,   backward_trials,
                         cost_trials,       dpp_trials,        closed_loop_trials,
                         g_monotone_trials};
  for (long c : counts)
    if (c < 1) throw std::invalid_argument("suite sample counts must be positive");
  if (oracle_grid < 2) throw std::invalid_argument("oracle grid needs at least 2 points");
  if (field_n < 2) throw std::invalid_argument("field grid needs at least 2 subdivisions");
  if (!(cost_rel_tol > 0.0)) throw std::invalid_argument("cost_rel_tol must be positive");
  if (!(field_tol > 0.0)) throw std::invalid_argument("field_tol must be positive");
}

SuiteResult check_gronwall(const ModelParams& params, int trials, std::uint64_t seed) {
  const double lipschitz = model_constants(params).field_lipschitz;
  const double horizon = 8.0;
  Sampler smp(seed);
  double worst = -1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const State x0 = smp.triangle();
    const State x0_alt = smp.triangle();
    const ControlSignal control = smp.control(params.l_bar, 3, horizon);
    const ControlSignal control_alt = smp.control(params.l_bar, 3, horizon);
    const Trajectory traj = integrate_forward(x0, control, horizon, 0.01, params);
    const Trajectory traj_alt = integrate_forward(x0_alt, control_alt, horizon, 0.01, params);
    const double initial_gap = norm2(x0.s - x0_alt.s, x0.i - x0_alt.i);
    for (int j = 1; j <= 32; ++j) {
      const double t = horizon * j / 32.0;
      const State a = state_at(traj, t);
      const State b = state_at(traj_alt, t);
      const double lhs = norm2(a.s - b.s, a.i - b.i);
      const double rhs = (initial_gap + 4.0 * params.theta * (params.l_bar + 1.0) *
                                            control.integral_abs_diff(control_alt, t)) *
                         std::exp(lipschitz * t);
      worst = std::max(worst, lhs - rhs);
    }
  }
  return make_result("dynamics.gronwall", trials, worst, 0.0, seed);
}

SuiteResult check_cost_identity(const ModelParams& params, int trials, double rel_tol,
                                std::uint64_t seed) {
  Sampler smp(seed);
  const double scale = params.w / params.r;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const State x0 = smp.triangle();
    // Draws live on the face with no initial deaths; the identity needs
    // N_0 - D_0 = 1.
    const FullState full{x0.s, x0.i, 1.0 - x0.s - x0.i, 0.0};
    const ControlSignal control = smp.control(params.l_bar, 3, 10.0);
    const double objective = evaluate_output_objective(full, control, params, rel_tol);
    const double cost = evaluate_cost(x0, control, params, rel_tol).value;
    worst = std::max(worst, std::abs(objective - (scale - cost)));
  }
  return make_result("cost.identity", trials, worst, 5.0 * rel_tol * scale, seed);
}

std::vector<SuiteResult> check_dpp(const ValueField& field, const ModelParams& params,
                                   int trials, std::uint64_t seed) {
  const double delta = params.discount();
  const double h = field.grid.spacing();
  const double dt = field.info.dt;
  const double cost_bound = model_constants(params).cost_bound;
  const double horizon = 10.0 * dt;
  const int m = std::max(field.info.control_grid, 2);
  Sampler smp(seed);

  double worst_fwd = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const State x = smp.interior(2.0 * h);
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < m; ++g)
      best = std::min(best, dpp_forward_value(field, params, x,
                                              params.l_bar * g / (m - 1), horizon));
    worst_fwd = std::max(worst_fwd, std::abs(field(x) - best));
  }

  double worst_bwd = -1.0;
  int skipped = 0;
  // Two deliberate starts: the far edge (empty admissible backward set) and
  // the s=0 edge (backward flow stays on the edge).
  const int bwd_trials = trials + 2;
  for (int trial = 0; trial < bwd_trials; ++trial) {
    const State x = trial == 0   ? State{0.6, 0.4}
                    : trial == 1 ? State{0.0, 0.5}
                                 : smp.interior(2.0 * h);
    const double level = smp.uniform(0.0, params.l_bar);
    // Backward run with the reward integral accumulated alongside.
    std::array<double, 3> y{x.s, x.i, 0.0};
    bool admissible = true;
    const int steps = 20;
    const double hstep = horizon / steps;
    for (int step = 0; step < steps && admissible; ++step) {
      const double u0 = step * hstep;
      y = detail::rk4_step<3>(y, u0, hstep, [&](double uu, const std::array<double, 3>& v) {
        const double damp = 1.0 - params.theta * level;
        const double flux = params.beta * v[0] * v[1] * damp * damp;
        const double removal = (params.gamma + params.phi(v[1])) * v[1];
        const double rate = std::exp(delta * uu) *
                            ((v[0] + v[1]) * level * params.w +
                             (params.w / params.r + params.chi) * v[1] * params.phi(v[1]));
        return std::array<double, 3>{flux, removal - flux, rate};
      });
      if (!State{y[0], y[1]}.in_triangle()) admissible = false;
    }
    if (!admissible) {
      ++skipped;  // empty admissible backward set from here
      continue;
    }
    const double rhs = field({y[0], y[1]}) * std::exp(delta * horizon) - y[2];
    worst_bwd = std::max(worst_bwd, rhs - field(x));
  }

  const double tol = 10.0 * (h + dt) * cost_bound;
  return {
      make_result("hjb.dpp_forward", trials, worst_fwd, tol, seed),
      make_result("hjb.dpp_backward", bwd_trials - skipped, worst_bwd,
                  tol * std::exp(delta * horizon), seed,
                  "skipped=" + std::to_string(skipped)),
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "dynamics.invariance",
      "dynamics.monotone_population",
      "dynamics.gronwall",
      "dynamics.field_bound",
      "dynamics.field_lipschitz",
      "dynamics.backward_consistency",
      "cost.identity",
      "cost.bounds",
      "cost.chi_monotone",
      "cost.lipschitz",
      "hamiltonian.partition",
      "hamiltonian.oracle",
      "hamiltonian.minimizer_cell",
      "hamiltonian.minimizer_value",
      "hamiltonian.concavity",
      "hamiltonian.boundary_continuity",
      "hjb.value_bounds",
      "hjb.edge_values",
      "hjb.monotone_edge",
      "hjb.fixed_point",
      "hjb.contraction",
      "hjb.lipschitz",
      "hjb.dpp_forward",
      "hjb.dpp_backward",
      "policy.g_monotone",
      "policy.closed_loop_cost",
      "policy.g_constant",
      "policy.pointwise_min",
      "policy.laissez_faire",
  };
  return names;
}

SuiteReport run_all(const ModelParams& params, const VerifyOptions& options) {
  params.validate();
  options.validate();
  for (const std::string& want : options.only) {
    bool known = false;
    for (const std::string& name : suite_names())
      known = known || name == want || name.rfind(want + ".", 0) == 0;
    if (!known) throw std::invalid_argument("unknown suite name: " + want);
  }
  const auto selected = [&](std::string_view name) {
    if (options.only.empty()) return true;
    for (const std::string& want : options.only)
      if (name == want || name.substr(0, want.size() + 1) == want + ".") return true;
    return false;
  };

  SuiteReport report;
  report.base_seed = options.seed;
  const auto seed_for = [&](std::string_view name) {
    return suite_seed(options.seed, name);
  };
  const auto add = [&](std::vector<SuiteResult> results) {
    for (SuiteResult& result : results)
      if (selected(result.name)) report.suites.push_back(std::move(result));
  };

  // Solved fields are built on demand and shared across suites.
  std::unique_ptr<ValueField> field;
  const auto the_field = [&]() -> const ValueField& {
    if (!field) {
      SolverOptions solver;
      solver.subdivisions = options.field_n;
      solver.control_grid = options.control_grid;
      solver.tol = options.field_tol;
      solver.workers = options.workers;
      field = std::make_unique<ValueField>(solve_value_function(params, solver));
    }
    return *field;
  };

  if (selected("dynamics.invariance") || selected("dynamics.monotone_population"))
    add(suite_dynamics_invariance(params, options.invariance_trials,
                                  seed_for("dynamics.invariance")));
  if (selected("dynamics.gronwall"))
    add({check_gronwall(params, options.gronwall_trials, seed_for("dynamics.gronwall"))});
  if (selected("dynamics.field_bound") || selected("dynamics.field_lipschitz"))
    add(suite_field_bound_lipschitz(params, options.bound_samples,
                                    options.lipschitz_samples,
                                    seed_for("dynamics.field_bound")));
  if (selected("dynamics.backward_consistency"))
    add({suite_backward_consistency(params, options.backward_trials,
                                    seed_for("dynamics.backward_consistency"))});
  if (selected("cost.identity"))
    add({check_cost_identity(params, options.cost_trials, options.cost_rel_tol,
                             seed_for("cost.identity"))});
  if (selected("cost.bounds") || selected("cost.chi_monotone"))
    add(suite_cost_bounds_monotone(params, options.cost_trials, seed_for("cost.bounds")));
  if (selected("cost.lipschitz"))
    add({suite_cost_lipschitz(params, options.lipschitz_samples,
                              seed_for("cost.lipschitz"))});
  if (selected("hamiltonian.partition"))
    add({suite_partition(params, options.partition_samples,
                         seed_for("hamiltonian.partition"))});
  if (selected("hamiltonian.oracle") || selected("hamiltonian.minimizer_cell") ||
      selected("hamiltonian.minimizer_value"))
    add(suite_oracle(params, options.oracle_samples, options.oracle_grid,
                     seed_for("hamiltonian.oracle")));
  if (selected("hamiltonian.concavity"))
    add({suite_concavity(params, options.concavity_samples,
                         seed_for("hamiltonian.concavity"))});
  if (selected("hamiltonian.boundary_continuity"))
    add({suite_boundary_continuity(params, options.boundary_samples,
                                   seed_for("hamiltonian.boundary_continuity"))});
  if (selected("hjb.value_bounds") || selected("hjb.edge_values") ||
      selected("hjb.monotone_edge"))
    add(suite_field_basics(the_field(), params, seed_for("hjb.value_bounds")));
  if (selected("hjb.fixed_point") || selected("hjb.contraction"))
    add(suite_fixed_point_contraction(the_field(), params, seed_for("hjb.fixed_point")));
  if (selected("hjb.lipschitz")) {
    // Raise the vaccine intensity so the discount dominates the field's
    // Lipschitz constant.
    ModelParams steep = params;
    const double lipschitz = model_constants(params).field_lipschitz;
    steep.nu = std::max(params.nu, 1.25 * lipschitz + 0.05 - params.r);
    SolverOptions solver;
    solver.subdivisions = options.field_n;
    solver.control_grid = options.control_grid;
    solver.tol = options.field_tol;
    solver.workers = options.workers;
    const ValueField steep_field = solve_value_function(steep, solver);
    add({suite_field_lipschitz(steep_field, steep, seed_for("hjb.lipschitz"))});
  }
  if (selected("hjb.dpp_forward") || selected("hjb.dpp_backward"))
    add(check_dpp(the_field(), params, options.dpp_trials, seed_for("hjb.dpp_forward")));

  if (selected("policy.g_monotone")) {
    const ValueField& f = the_field();
    const double tol =
        10.0 * (f.grid.spacing() + f.info.dt) * model_constants(params).cost_bound;
    Sampler smp(seed_for("policy.g_monotone"));
    const double delta = params.discount();
    double worst = -1.0;
    for (int trial = 0; trial < options.g_monotone_trials; ++trial) {
      const State x0 = smp.interior(2.0 * f.grid.spacing());
      const ControlSignal control = smp.control(params.l_bar, 3, 20.0);
      std::array<double, 3> y{x0.s, x0.i, 0.0};
      double prev_g = y[2] + f({y[0], y[1]});
      double t = 0.0;
      const double step = 0.02;
      while (t < 20.0 - 1e-12) {
        const double t_next = std::min(t + step, 20.0);
        const double level = control(t);
        y = detail::rk4_step<3>(y, t, t_next - t,
                                [&](double tt, const std::array<double, 3>& v) {
                                  const double damp = 1.0 - params.theta * level;
                                  const double flux = params.beta * v[0] * v[1] * damp * damp;
                                  const double removal =
                                      (params.gamma + params.phi(v[1])) * v[1];
                                  const double rate =
                                      std::exp(-delta * tt) *
                                      ((v[0] + v[1]) * level * params.w +
                                       (params.w / params.r + params.chi) * v[1] *
                                           params.phi(v[1]));
                                  return std::array<double, 3>{-flux, flux - removal, rate};
                                });
        t = t_next;
        const double g = y[2] + std::exp(-delta * t) * f({y[0], y[1]});
        worst = std::max(worst, prev_g - g);
        prev_g = g;
      }
    }
    add({make_result("policy.g_monotone", options.g_monotone_trials, worst, tol,
                     seed_for("policy.g_monotone"))});
  }

  if (selected("policy.closed_loop_cost") || selected("policy.g_constant") ||
      selected("policy.pointwise_min") || selected("policy.laissez_faire")) {
    const ValueField& f = the_field();
    const double tol_cost = 20.0 * (f.grid.spacing() + f.info.dt) *
                            model_constants(params).cost_bound / params.discount();
    Sampler smp(seed_for("policy.closed_loop_cost"));
    double worst_cost = 0.0, worst_g = 0.0, worst_min = -1.0, worst_laissez = -1.0;
    const int m = std::max(f.info.control_grid, 2);
    for (int trial = 0; trial < options.closed_loop_trials; ++trial) {
      const State x0 = smp.interior(2.0 * f.grid.spacing());
      const PolicyReport report_cl = simulate_closed_loop(f, x0, 30.0, 0.01, params);
      worst_cost = std::max(worst_cost,
                            std::abs(report_cl.realized_cost - report_cl.field_value_at_start));
      const double g0 = report_cl.steps.front().running_value;
      for (std::size_t k = 0; k < report_cl.steps.size(); k += 10) {
        const PolicyStep& step = report_cl.steps[k];
        worst_g = std::max(worst_g, std::abs(step.running_value - g0));
        const Costate c = finite_difference_costate(f, step.x);
        if (c.q <= c.p) worst_laissez = std::max(worst_laissez, step.lockdown);
        double grid_min = std::numeric_limits<double>::infinity();
        for (int g = 0; g < m; ++g)
          grid_min = std::min(grid_min,
                              current_value_hamiltonian(
                                  step.x, c, params.l_bar * g / (m - 1), params));
        worst_min = std::max(worst_min, current_value_hamiltonian(step.x, c, step.lockdown,
                                                                  params) -
                                            grid_min);
      }
    }
    add({make_result("policy.closed_loop_cost", options.closed_loop_trials, worst_cost,
                     tol_cost, seed_for("policy.closed_loop_cost")),
         make_result("policy.g_constant", options.closed_loop_trials, worst_g, tol_cost,
                     seed_for("policy.closed_loop_cost")),
         make_result("policy.pointwise_min", options.closed_loop_trials, worst_min, 1e-8,
                     seed_for("policy.closed_loop_cost")),
         make_result("policy.laissez_faire", options.closed_loop_trials, worst_laissez,
                     0.0, seed_for("policy.closed_loop_cost"))});
  }

  return report;
}

std::string report_text(const SuiteReport& report) {
  std::ostringstream out;
  out << "seed " << report.base_seed << "\n";
  char line[192];
  std::snprintf(line, sizeof(line), "%-34s %10s %20s %18s %5s\n", "suite", "samples",
                "max_violation", "tolerance", "pass");
  out << line;
  for (const SuiteResult& suite : report.suites) {
    std::snprintf(line, sizeof(line), "%-34s %10ld %20s %18s %5s", suite.name.c_str(),
                  suite.samples, format_g12(suite.max_violation).c_str(),
                  format_g12(suite.tolerance).c_str(), suite.pass ? "yes" : "NO");
    out << line;
    if (!suite.note.empty()) out << "  # " << suite.note;
    out << "\n";
  }
  out << "all pass: " << (report.all_pass() ? "yes" : "NO") << "\n";
  return out.str();
}

std::string report_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "suite,samples,max_violation,tolerance,pass,seed\n";
  for (const SuiteResult& suite : report.suites)
    out << suite.name << ',' << suite.samples << ',' << format_g12(suite.max_violation)
        << ',' << format_g12(suite.tolerance) << ',' << (suite.pass ? 1 : 0) << ','
        << suite.seed << '\n';
  return out.str();
}

}  // namespace sird
