#pragma once

#include <ostream>
#include <span>
#include <string>

#include "sird/policy.hpp"
#include "sird/state.hpp"
#include "sird/value_field.hpp"

namespace sird {

/// Floating-point text with 12 significant digits; all CSV output goes
/// through this so golden files stay byte-stable.
std::string format_g12(double v);

/// Header t,s,i,r,d,l; the r,d columns stay empty for reduced trajectories.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
void write_trajectory_csv(const FullTrajectory& trajectory, std::ostream& out);

/// Header s,i,value,ds_value,di_value,residual.
void write_field_csv(const ValueField& field, std::span<const double> residuals,
                     std::ostream& out);

/// Header t,s,i,l,region,K1,K2,pressure,running_cost.
void write_policy_csv(const PolicyReport& report, std::ostream& out);

}  // namespace sird
