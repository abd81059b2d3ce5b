#pragma once

#include "sird/params.hpp"
#include "sird/state.hpp"

namespace sird {

/// Instantaneous economic cost: lockdown output loss plus death cost rate.
double running_cost(const State& x, double lockdown, const ModelParams& params);

struct CostValue {
  double value = 0.0;
  double horizon = 0.0;  // truncation time; the discarded tail is certified
                         // below rel_tol * w / r
};

/// Discounted infinite-horizon cost of a control from a reduced state.
CostValue evaluate_cost(const State& x0, const ControlSignal& control,
                        const ModelParams& params, double rel_tol, double dt = 0.01);

/// Expected discounted output objective of the pre-reduction problem: the
/// outer integral averages over the exponential arrival time of the vaccine,
/// with the epidemic frozen (susceptible and infected recovered instantly)
/// after arrival.
double evaluate_output_objective(const FullState& x0, const ControlSignal& control,
                                 const ModelParams& params, double rel_tol,
                                 double dt = 0.01);

}  // namespace sird
