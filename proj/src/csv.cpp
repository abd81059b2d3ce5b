#include "sird/csv.hpp"

#include <cstdio>

namespace sird {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  out << "t,s,i,r,d,l\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k)
    out << format_g12(trajectory.times[k]) << ',' << format_g12(trajectory.states[k].s)
        << ',' << format_g12(trajectory.states[k].i) << ",,,"
        << format_g12(trajectory.controls[k]) << '\n';
}

void write_trajectory_csv(const FullTrajectory& trajectory, std::ostream& out) {
  out << "t,s,i,r,d,l\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const FullState& x = trajectory.states[k];
    out << format_g12(trajectory.times[k]) << ',' << format_g12(x.s) << ','
        << format_g12(x.i) << ',' << format_g12(x.r_frac) << ',' << format_g12(x.d)
        << ',' << format_g12(trajectory.controls[k]) << '\n';
  }
}

void write_field_csv(const ValueField& field, std::span<const double> residuals,
                     std::ostream& out) {
  out << "s,i,value,ds_value,di_value,residual\n";
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    const State x = field.grid.node(idx);
    const Costate c = finite_difference_costate(field, x);
    const double residual = idx < residuals.size() ? residuals[idx] : 0.0;
    out << format_g12(x.s) << ',' << format_g12(x.i) << ','
        << format_g12(field.values[idx]) << ',' << format_g12(c.p) << ','
        << format_g12(c.q) << ',' << format_g12(residual) << '\n';
  }
}

void write_policy_csv(const PolicyReport& report, std::ostream& out) {
  out << "t,s,i,l,region,K1,K2,pressure,running_cost\n";
  for (const PolicyStep& step : report.steps)
    out << format_g12(step.t) << ',' << format_g12(step.x.s) << ','
        << format_g12(step.x.i) << ',' << format_g12(step.lockdown) << ','
        << region_name(step.region) << ',' << format_g12(step.k1) << ','
        << format_g12(step.k2) << ',' << format_g12(step.pressure) << ','
        << format_g12(step.cost_rate) << '\n';
}

}  // namespace sird
