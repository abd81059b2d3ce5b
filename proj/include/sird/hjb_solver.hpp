#pragma once

#include <span>
#include <vector>

#include "sird/params.hpp"
#include "sird/value_field.hpp"

namespace sird {

struct SolverOptions {
  int subdivisions = 100;  // grid edge subdivisions
  double dt = 0.0;         // 0 selects 0.5 * spacing / field_bound
  int control_grid = 21;   // lockdown candidates per node
  double tol = 1e-6;
  int max_iter = 200000;
  int workers = 1;
};

struct SweepResult {
  std::vector<double> values;
  double residual = 0.0;  // sup-norm change
};

/// One Jacobi sweep of the discounted Bellman operator: at every node,
/// minimize the one-step cost over a uniform lockdown grid augmented with the
/// analytic minimizer candidate from the finite-difference costate.
SweepResult bellman_update(const ValueField& field, const ModelParams& params,
                           double dt, int control_grid, int workers = 1);

/// Fixed-point iteration from the zero field until the sup-norm residual
/// drops below tol * (1 - contraction factor). Throws ConvergenceError after
/// max_iter sweeps.
ValueField solve_value_function(const ModelParams& params, const SolverOptions& options);

/// Per-node residual of the stationary equation: discount * value minus the
/// Hamiltonian at the finite-difference costate.
std::vector<double> hjb_residuals(const ValueField& field, const ModelParams& params);

struct ResidualSummary {
  double median_interior = 0.0;
  double p90_interior = 0.0;
  double max_interior = 0.0;
};

ResidualSummary summarize_residuals(const ValueField& field,
                                    std::span<const double> residuals);

}  // namespace sird
