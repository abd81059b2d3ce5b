#include "sird/hjb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sird/errors.hpp"
#include "sird/hamiltonian.hpp"

namespace sird {

namespace {

/// Per-sweep state shared by the node workers.
struct SweepContext {
  const TriangularGrid& grid;
  const std::vector<double>& old_values;
  const ModelParams& params;
  double dt;
  double discount_step;            // e^{-(r+nu) dt}
  std::vector<double> levels;      // uniform candidate grid on [0, l_bar]
  std::vector<double> damp_sq;     // (1 - theta l)^2 per candidate
};

double node_derivative(const SweepContext& ctx, int j, int k, bool s_direction) {
  const int n = ctx.grid.subdivisions();
  const double h = ctx.grid.spacing();
  const auto value = [&](int jj, int kk) {
    return ctx.old_values[ctx.grid.node_index(jj, kk)];
  };
  const int dj = s_direction ? 1 : 0;
  const int dk = s_direction ? 0 : 1;
  const bool fwd = j + k + 1 <= n;
  const bool bwd = s_direction ? j >= 1 : k >= 1;
  if (fwd && bwd) return (value(j + dj, k + dk) - value(j - dj, k - dk)) / (2.0 * h);
  if (fwd) return (value(j + dj, k + dk) - value(j, k)) / h;
  if (bwd) return (value(j, k) - value(j - dj, k - dk)) / h;
  return 0.0;
}

void sweep_range(const SweepContext& ctx, std::size_t begin, std::size_t end,
                 std::vector<double>& out, double& max_change) {
  const ModelParams& p = ctx.params;
  const double dt = ctx.dt;
  double local_max = 0.0;
  for (std::size_t idx = begin; idx < end; ++idx) {
    const int j = ctx.grid.node_j(idx);
    const int k = ctx.grid.node_k(idx);
    const State x = ctx.grid.node(idx);
    const double phi_i = p.phi(x.i);
    const double interaction = p.beta * x.s * x.i;
    const double removal = (p.gamma + phi_i) * x.i;
    const double lockdown_cost = (x.s + x.i) * p.w;            // per unit level
    const double death_cost = (p.w / p.r + p.chi) * x.i * phi_i;

    const auto candidate_value = [&](double level, double damp2) {
      const double flux = interaction * damp2;
      const State foot{x.s - dt * flux, x.i + dt * (flux - removal)};
      return dt * (lockdown_cost * level + death_cost) +
             ctx.discount_step * ctx.grid.interpolate(ctx.old_values, foot);
    };

    double best = candidate_value(ctx.levels[0], ctx.damp_sq[0]);
    for (std::size_t g = 1; g < ctx.levels.size(); ++g) {
      const double v = candidate_value(ctx.levels[g], ctx.damp_sq[g]);
      if (v < best) best = v;
    }
    // Analytic interior minimizer from the frozen field's costate.
    if (x.s > 0.0 && x.i > 0.0) {
      const Costate c{node_derivative(ctx, j, k, true), node_derivative(ctx, j, k, false)};
      if (classify(x, c, p) == Region::A3) {
        const double level = minimizer(x, c, p).value;
        const double damp = 1.0 - p.theta * level;
        const double v = candidate_value(level, damp * damp);
        if (v < best) best = v;
      }
    }
    out[idx] = best;
    local_max = std::max(local_max, std::abs(best - ctx.old_values[idx]));
  }
  max_change = local_max;
}

}  // namespace

SweepResult bellman_update(const ValueField& field, const ModelParams& params,
                           double dt, int control_grid, int workers) {
  params.validate();
  if (control_grid < 2) throw std::invalid_argument("control grid needs at least 2 points");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  // One explicit step from any node must stay in the triangle.
  const double rate_cap = std::max(params.beta, params.gamma + params.phi.max_value());
  if (dt * rate_cap >= 1.0)
    throw StepError("dt too large: a characteristic step can exit the triangle");

  SweepContext ctx{field.grid,
                   field.values,
                   params,
                   dt,
                   std::exp(-params.discount() * dt),
                   {},
                   {}};
  ctx.levels.resize(static_cast<std::size_t>(control_grid));
  ctx.damp_sq.resize(ctx.levels.size());
  for (int g = 0; g < control_grid; ++g) {
    const double level = params.l_bar * g / (control_grid - 1);
    ctx.levels[static_cast<std::size_t>(g)] = level;
    const double damp = 1.0 - params.theta * level;
    ctx.damp_sq[static_cast<std::size_t>(g)] = damp * damp;
  }

  const std::size_t count = field.grid.node_count();
  SweepResult result;
  result.values.resize(count);
  workers = std::clamp(workers, 1, 64);
  try {
    if (workers == 1 || count < 256) {
      sweep_range(ctx, 0, count, result.values, result.residual);
      return result;
    }
    std::vector<double> maxima(static_cast<std::size_t>(workers), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    for (int t = 0; t < workers; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end, t] {
        try {
          sweep_range(ctx, begin, end, result.values, maxima[static_cast<std::size_t>(t)]);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const std::exception_ptr& error : errors)
      if (error) std::rethrow_exception(error);
    for (double m : maxima) result.residual = std::max(result.residual, m);
    return result;
  } catch (const std::domain_error&) {
    throw StepError("a characteristic foot left the triangle; reduce dt");
  }
}

ValueField solve_value_function(const ModelParams& params, const SolverOptions& options) {
  params.validate();
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be positive");

  TriangularGrid grid(options.subdivisions);
  const double dt = options.dt > 0.0
                        ? options.dt
                        : 0.5 * grid.spacing() / model_constants(params).field_bound;
  const double contraction = std::exp(-params.discount() * dt);
  const double threshold = options.tol * (1.0 - contraction);

  ValueField field{std::move(grid), std::vector<double>(0), SolveInfo{}};
  field.values.assign(field.grid.node_count(), 0.0);
  field.info.params = params;
  field.info.dt = dt;
  field.info.control_grid = options.control_grid;
  field.info.tol = options.tol;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    SweepResult sweep = bellman_update(field, params, dt, options.control_grid,
                                       options.workers);
    field.values = std::move(sweep.values);
    field.info.residual_history.push_back(sweep.residual);
    if (sweep.residual <= threshold) {
      field.info.iterations = iter;
      field.info.final_residual = sweep.residual;
      return field;
    }
  }
  throw ConvergenceError("value iteration did not reach tolerance", options.max_iter,
                         field.info.residual_history.back());
}

std::vector<double> hjb_residuals(const ValueField& field, const ModelParams& params) {
  const std::size_t count = field.grid.node_count();
  std::vector<double> residuals(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const State x = field.grid.node(idx);
    const Costate c = finite_difference_costate(field, x);
    residuals[idx] = params.discount() * field.values[idx] - hamiltonian(x, c, params);
  }
  return residuals;
}

ResidualSummary summarize_residuals(const ValueField& field,
                                    std::span<const double> residuals) {
  const int n = field.grid.subdivisions();
  std::vector<double> interior;
  interior.reserve(residuals.size());
  for (std::size_t idx = 0; idx < residuals.size(); ++idx) {
    const int j = field.grid.node_j(idx);
    const int k = field.grid.node_k(idx);
    if (j >= 1 && k >= 1 && j + k <= n - 1) interior.push_back(std::abs(residuals[idx]));
  }
  if (interior.empty()) return {};
  std::sort(interior.begin(), interior.end());
  const auto at_quantile = [&](double q) {
    const std::size_t pos = static_cast<std::size_t>(q * (interior.size() - 1));
    return interior[pos];
  };
  return {at_quantile(0.5), at_quantile(0.9), interior.back()};
}

}  // namespace sird
