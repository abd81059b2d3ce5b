#pragma once

#include "sird/params.hpp"
#include "sird/state.hpp"

namespace sird {

/// Value-gradient pair (d/ds, d/di) entering the Hamiltonian.
struct Costate {
  double p = 0.0;
  double q = 0.0;
};

/// Closed-form case analysis of the Hamiltonian over state and costate.
/// The seven tags partition the triangle x R^2.
enum class Region { CI, CS, A0, A1, A2, A3, A4 };

const char* region_name(Region region);

/// Lockdown levels attaining the Hamiltonian minimum. The set is a singleton
/// everywhere except at the origin, where every level is optimal.
struct MinimizerSet {
  bool full_interval = false;
  double value = 0.0;  // meaningful in the singleton case
};

/// Control-indexed expression whose minimum over the lockdown level defines
/// the Hamiltonian.
double current_value_hamiltonian(const State& x, const Costate& c, double lockdown,
                                 const ModelParams& params);

Region classify(const State& x, const Costate& c, const ModelParams& params);

/// Closed-form branch value for the classified region; equals the minimum of
/// the current-value Hamiltonian over [0, l_bar].
double hamiltonian(const State& x, const Costate& c, const ModelParams& params);

MinimizerSet minimizer(const State& x, const Costate& c, const ModelParams& params);

}  // namespace sird
