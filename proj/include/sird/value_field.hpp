#pragma once

#include <string>
#include <vector>

#include "sird/grid.hpp"
#include "sird/hamiltonian.hpp"
#include "sird/params.hpp"

namespace sird {

struct SolveInfo {
  ModelParams params;
  double dt = 0.0;
  int control_grid = 0;
  double tol = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;  // in-memory only, not serialized
};

/// Grid-sampled approximation of the value function with linear interpolation.
struct ValueField {
  TriangularGrid grid;
  std::vector<double> values;
  SolveInfo info;

  double operator()(const State& x) const { return grid.interpolate(values, x); }
};

/// Finite-difference value gradient: central differences with the grid
/// spacing where both neighbours lie in the triangle, one-sided otherwise
/// (with a shortened step squeezed against the boundary when needed).
Costate finite_difference_costate(const ValueField& field, const State& x);

/// Binary round-trip format carrying params, grid size, dt and values.
void save_field(const ValueField& field, const std::string& path);
ValueField load_field(const std::string& path);

bool params_equal(const ModelParams& a, const ModelParams& b);

}  // namespace sird
