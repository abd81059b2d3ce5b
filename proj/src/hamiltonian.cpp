#include "sird/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sird {

namespace {

void check_state(const State& x) {
  if (!x.in_triangle())
    throw std::domain_error("state outside the triangle in the Hamiltonian");
}

/// Terms of the current-value Hamiltonian that do not involve the control.
double control_free_terms(const State& x, const Costate& c, const ModelParams& p) {
  const double phi = p.phi(x.i);
  return x.i * phi * (p.w / p.r + p.chi) - (p.gamma + phi) * x.i * c.q;
}

/// Vertex of the control parabola; only meaningful when q != p.
double parabola_vertex(const State& x, const Costate& c, const ModelParams& p) {
  return 1.0 / p.theta -
         p.w * (x.s + x.i) / (2.0 * p.theta * p.theta * (c.q - c.p) * p.beta * x.s * x.i);
}

}  // namespace

const char* region_name(Region region) {
  switch (region) {
    case Region::CI: return "C_I";
    case Region::CS: return "C_S";
    case Region::A0: return "A_0";
    case Region::A1: return "A_1";
    case Region::A2: return "A_2";
    case Region::A3: return "A_3";
    case Region::A4: return "A_4";
  }
  return "?";
}

double current_value_hamiltonian(const State& x, const Costate& c, double lockdown,
                                 const ModelParams& params) {
  check_state(x);
  if (lockdown < -1e-12 || lockdown > params.l_bar + 1e-12)
    throw std::domain_error("lockdown level outside [0, l_bar]");
  const double damp = 1.0 - params.theta * lockdown;
  return (x.s + x.i) * lockdown * params.w +
         params.beta * damp * damp * x.s * x.i * (c.q - c.p) +
         control_free_terms(x, c, params);
}

Region classify(const State& x, const Costate& c, const ModelParams& params) {
  check_state(x);
  if (x.i == 0.0) return Region::CI;
  if (x.s == 0.0) return Region::CS;
  // Exact comparisons; boundary ties follow the closed inequalities
  // (A2 and A4 closed, A3 open).
  if (c.q == c.p) return Region::A0;
  if (c.q < c.p) return Region::A1;
  const double gap = c.q - c.p;
  const double pressure = params.beta * x.s * x.i / (x.s + x.i);
  const double k1 = params.w / (2.0 * params.theta * gap);
  if (pressure <= k1) return Region::A2;
  const double k2 = params.w / (2.0 * params.theta * (1.0 - params.theta * params.l_bar) * gap);
  if (pressure < k2) return Region::A3;
  return Region::A4;
}

double hamiltonian(const State& x, const Costate& c, const ModelParams& params) {
  const Region region = classify(x, c, params);
  const double tail = control_free_terms(x, c, params);
  switch (region) {
    case Region::CI:
      return 0.0;
    case Region::CS:
    case Region::A0:
      return tail;
    case Region::A1:
    case Region::A2:
      return params.beta * x.s * x.i * (c.q - c.p) + tail;
    case Region::A3: {
      const double sum = x.s + x.i;
      return params.w * params.w * sum * sum /
                 (4.0 * params.theta * params.theta * (c.p - c.q) * params.beta * x.s * x.i) +
             params.w / params.theta * sum + tail;
    }
    case Region::A4: {
      const double damp = 1.0 - params.theta * params.l_bar;
      return params.beta * x.s * x.i * damp * damp * (c.q - c.p) +
             params.w * params.l_bar * (x.s + x.i) + tail;
    }
  }
  return tail;  // unreachable
}

MinimizerSet minimizer(const State& x, const Costate& c, const ModelParams& params) {
  if (x.s == 0.0 && x.i == 0.0) {
    check_state(x);
    return {true, 0.0};
  }
  switch (classify(x, c, params)) {
    case Region::A3:
      return {false, std::clamp(parabola_vertex(x, c, params), 0.0, params.l_bar)};
    case Region::A4:
      return {false, params.l_bar};
    default:
      return {false, 0.0};
  }
}

}  // namespace sird
