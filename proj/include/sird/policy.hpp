#pragma once

#include <vector>

#include "sird/hamiltonian.hpp"
#include "sird/params.hpp"
#include "sird/state.hpp"
#include "sird/value_field.hpp"

namespace sird {

struct FeedbackDecision {
  double lockdown = 0.0;
  Region region = Region::CI;
};

/// Feedback selection through the minimizer map at the finite-difference
/// costate; the whole-interval case at the origin resolves to zero.
FeedbackDecision feedback_law(const ValueField& field, const State& x,
                              const ModelParams& params);

struct LockdownThresholds {
  double k1 = 0.0;        // laissez-faire cutoff
  double k2 = 0.0;        // full-lockdown cutoff
  double pressure = 0.0;  // infection pressure beta*s*i/(s+i)
};

/// Infection-pressure cutoffs separating laissez-faire, partial and full
/// lockdown. Throws std::domain_error when q == p (thresholds undefined) or
/// when the state is not interior.
LockdownThresholds lockdown_thresholds(const State& x, const Costate& c,
                                       const ModelParams& params);

struct PolicyStep {
  double t = 0.0;
  State x;
  double lockdown = 0.0;
  Region region = Region::CI;
  double k1 = 0.0;  // NaN when undefined
  double k2 = 0.0;
  double pressure = 0.0;
  double cost_rate = 0.0;      // running cost at this instant
  double cost_to_date = 0.0;   // discounted cost accumulated so far
  double running_value = 0.0;  // cost_to_date + discounted field value here
};

struct PolicyReport {
  std::vector<PolicyStep> steps;
  double realized_cost = 0.0;         // accumulated + discounted field value at horizon
  double tail_bound = 0.0;            // cost bound on everything past the horizon
  double field_value_at_start = 0.0;
};

/// Sampled-data closed loop: the feedback is re-evaluated each step and held
/// constant within it.
PolicyReport simulate_closed_loop(const ValueField& field, const State& x0,
                                  double horizon, double dt, const ModelParams& params);

}  // namespace sird
