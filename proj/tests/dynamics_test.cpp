#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sird/csv.hpp"
#include "sird/dynamics.hpp"
#include "sird/errors.hpp"
#include "sird/verify.hpp"

using namespace sird;

namespace {

ModelParams toy_params() {
  ModelParams p;
  p.beta = 0.3;
  p.gamma = 0.1;
  p.theta = 0.5;
  p.l_bar = 1.0;
  p.nu = 0.5;
  p.r = 0.05;
  p.w = 1.0;
  p.chi = 2.0;
  p.phi.kind = MortalityKind::Constant;
  p.phi.base = 0.05;
  return p;
}

}  // namespace

TEST_CASE("vector field vanishes when nobody is infected") {
  const ModelParams p = toy_params();
  for (double s : {0.0, 0.3, 1.0})
    for (double l : {0.0, 0.5, 1.0}) {
      const Rates b = vector_field({s, 0.0}, l, p);
      CHECK(b.ds == 0.0);
      CHECK(b.di == 0.0);
    }
}

TEST_CASE("vector field matches hand evaluation") {
  const ModelParams p = toy_params();
  // No lockdown: flux = 0.3*0.25 = 0.075, removal = (0.1+0.05)*0.5 = 0.075.
  Rates b = vector_field({0.5, 0.5}, 0.0, p);
  CHECK(b.ds == doctest::Approx(-0.075).epsilon(1e-14));
  CHECK(b.di == doctest::Approx(0.0).epsilon(1e-14));
  // Full lockdown at theta=0.5 damps the flux by (1-0.5)^2 = 0.25.
  b = vector_field({0.5, 0.5}, 1.0, p);
  CHECK(b.ds == doctest::Approx(-0.01875).epsilon(1e-14));
  CHECK(b.di == doctest::Approx(-0.05625).epsilon(1e-14));
}

TEST_CASE("vector field rejects bad inputs") {
  const ModelParams p = toy_params();
  CHECK_THROWS_AS(vector_field({0.6, 0.6}, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(vector_field({-0.1, 0.2}, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(vector_field({0.2, 0.2}, -0.5, p), std::domain_error);
  CHECK_THROWS_AS(vector_field({0.2, 0.2}, 1.5, p), std::domain_error);
}

TEST_CASE("model constants follow the closed formulas") {
  ModelParams p = toy_params();
  p.beta = 0.2;
  p.gamma = 0.1;
  ModelConstants c = model_constants(p);
  CHECK(c.field_bound == doctest::Approx(0.9));
  CHECK(c.field_lipschitz == doctest::Approx(0.6));  // constant phi drops its slope
  // l_bar=1, w=1, r=0.05, chi=2, gamma=0.1: 1 + 22*0.1 = 3.2
  CHECK(c.cost_bound == doctest::Approx(3.2));
  CHECK(c.cost_lipschitz == doctest::Approx(6.4));

  p.phi.kind = MortalityKind::AffineSaturating;
  p.phi.base = 0.01;
  p.phi.slope = 0.04;
  p.phi.cap = 0.1;
  c = model_constants(p);
  CHECK(c.field_lipschitz == doctest::Approx(2.0 * (0.2 + 0.1 + 0.04)));
}

TEST_CASE("trajectory from a disease-free state is constant") {
  const ModelParams p = toy_params();
  const Trajectory traj =
      integrate_forward({0.7, 0.0}, ControlSignal::constant(0.4), 5.0, 0.05, p);
  for (const State& x : traj.states) {
    CHECK(x.s == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(x.i == 0.0);
  }
}

TEST_CASE("dynamics on the s=0 edge ignore the control") {
  const ModelParams p = toy_params();
  const Trajectory a =
      integrate_forward({0.0, 0.4}, ControlSignal::constant(0.0), 6.0, 0.01, p);
  const Trajectory b =
      integrate_forward({0.0, 0.4}, ControlSignal({0.0, 2.0}, {0.9, 0.1}), 6.0, 0.01, p);
  REQUIRE(a.times.size() > 2);
  for (std::size_t k = 0; k < std::min(a.states.size(), b.states.size()); ++k) {
    if (a.times[k] != b.times[k]) break;  // breakpoint split desynchronises sampling
    CHECK(a.states[k].s == 0.0);
    CHECK(a.states[k].i == doctest::Approx(b.states[k].i).epsilon(1e-12));
  }
}

TEST_CASE("initial infection growth matches the sign of the field") {
  const ModelParams p = toy_params();
  // beta*s0 = 0.18 > gamma + phi = 0.15: the wave rises first.
  Trajectory rising =
      integrate_forward({0.6, 0.1}, ControlSignal::constant(0.0), 1.0, 0.01, p);
  CHECK(rising.states[1].i > rising.states[0].i);
  // beta*s0 = 0.09 < 0.15: it only decays.
  Trajectory falling =
      integrate_forward({0.3, 0.1}, ControlSignal::constant(0.0), 1.0, 0.01, p);
  CHECK(falling.states[1].i < falling.states[0].i);
}

TEST_CASE("forward trajectories stay in the triangle with s+i non-increasing") {
  const ModelParams p = toy_params();
  const Trajectory traj = integrate_forward(
      {0.55, 0.45}, ControlSignal({0.0, 1.5, 4.0}, {0.0, 0.8, 0.2}), 12.0, 0.01, p);
  double prev = traj.states.front().s + traj.states.front().i;
  for (const State& x : traj.states) {
    CHECK(x.in_triangle(0.0));
    const double sum = x.s + x.i;
    CHECK(sum <= prev + 1e-12);
    prev = sum;
  }
}

TEST_CASE("four-compartment integration conserves the population") {
  const ModelParams p = toy_params();
  const FullTrajectory traj = integrate_full({0.6, 0.3, 0.05, 0.05},
                                             ControlSignal::constant(0.5), 20.0, 0.01, p);
  double prev_d = traj.states.front().d;
  for (const FullState& x : traj.states) {
    CHECK(std::abs(x.s + x.i + x.r_frac + x.d - 1.0) <= 1e-9);
    CHECK(x.d >= prev_d - 1e-15);
    prev_d = x.d;
  }
}

TEST_CASE("four-compartment integration is frozen without infections") {
  const ModelParams p = toy_params();
  const FullTrajectory traj =
      integrate_full({0.5, 0.0, 0.3, 0.2}, ControlSignal::constant(0.7), 5.0, 0.05, p);
  for (const FullState& x : traj.states) {
    CHECK(x.s == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x.i == 0.0);
    CHECK(x.r_frac == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(x.d == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("backward runs from the far edge are never admissible") {
  const ModelParams p = toy_params();
  for (double l : {0.0, 0.5, 1.0}) {
    const BackwardRun run =
        integrate_backward({0.6, 0.4}, ControlSignal::constant(l), 2.0, 0.01, p);
    CHECK_FALSE(run.admissible);
  }
}

TEST_CASE("backward run from a disease-free state is constant and admissible") {
  const ModelParams p = toy_params();
  const BackwardRun run =
      integrate_backward({0.4, 0.0}, ControlSignal::constant(0.3), 10.0, 0.1, p);
  CHECK(run.admissible);
  for (const State& x : run.path.states) {
    CHECK(x.s == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(x.i == 0.0);
  }
}

TEST_CASE("backward run on the s=0 edge matches the one-dimensional solution") {
  const ModelParams p = toy_params();
  // With constant phi the backward infected fraction is i0 * e^{(gamma+phi) u}.
  const double growth = p.gamma + p.phi.base;
  const BackwardRun ok =
      integrate_backward({0.0, 0.5}, ControlSignal::constant(0.6), 3.0, 0.01, p);
  CHECK(ok.admissible);
  for (std::size_t k = 0; k < ok.path.times.size(); ++k) {
    CHECK(ok.path.states[k].s == 0.0);
    CHECK(ok.path.states[k].i ==
          doctest::Approx(0.5 * std::exp(growth * ok.path.times[k])).epsilon(1e-9));
  }
  // Past ln(2)/growth ~ 4.6 the backward wave would exceed the whole population.
  const BackwardRun exits =
      integrate_backward({0.0, 0.5}, ControlSignal::constant(0.6), 6.0, 0.01, p);
  CHECK_FALSE(exits.admissible);
  CHECK(exits.path.times.back() < 6.0);
}

TEST_CASE("forward integration from a backward endpoint returns to the start") {
  const ModelParams p = toy_params();
  const State y0{0.5, 0.2};
  const double duration = 2.5;
  const ControlSignal backward_control({0.0, 1.0}, {0.3, 0.8});
  const BackwardRun run = integrate_backward(y0, backward_control, duration, 0.005, p);
  REQUIRE(run.admissible);
  const ControlSignal forward_control({0.0, duration - 1.0}, {0.8, 0.3});
  const Trajectory fwd =
      integrate_forward(run.path.states.back(), forward_control, duration, 0.005, p);
  const State end = fwd.states.back();
  CHECK(std::hypot(end.s - y0.s, end.i - y0.i) <= 1e-6);
}

TEST_CASE("pairwise trajectory deviation respects the growth estimate") {
  const SuiteResult result = check_gronwall(toy_params(), 25, 97531);
  CHECK(result.pass);
  CHECK(result.max_violation <= 0.0);
}

TEST_CASE("step error triggers on an absurd step size") {
  ModelParams p = toy_params();
  p.beta = 3.0;  // stiff wave
  CHECK_THROWS_AS(
      integrate_forward({0.5, 0.5}, ControlSignal::constant(0.0), 10.0, 3.0, p),
      StepError);
}

TEST_CASE("trajectory CSV uses the documented header and empty r,d columns") {
  const ModelParams p = toy_params();
  const Trajectory traj =
      integrate_forward({0.25, 0.125}, ControlSignal::constant(0.5), 0.2, 0.1, p);
  std::ostringstream out;
  write_trajectory_csv(traj, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,s,i,r,d,l\n", 0) == 0);
  CHECK(text.find("0,0.25,0.125,,,0.5\n") != std::string::npos);
}

TEST_CASE("control signals evaluate on right-open intervals") {
  const ControlSignal control({0.0, 1.0, 2.5}, {0.1, 0.2, 0.3});
  CHECK(control(0.0) == 0.1);
  CHECK(control(0.999) == 0.1);
  CHECK(control(1.0) == 0.2);
  CHECK(control(2.5) == 0.3);
  CHECK(control(100.0) == 0.3);
  CHECK(control.next_breakpoint_after(0.0) == 1.0);
  CHECK(control.next_breakpoint_after(1.0) == 2.5);
  CHECK(std::isinf(control.next_breakpoint_after(2.5)));
  CHECK_THROWS_AS(ControlSignal({0.5}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(ControlSignal({0.0, 0.0}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("control difference integral is exact for piecewise signals") {
  const ControlSignal a({0.0, 2.0}, {0.5, 0.0});
  const ControlSignal b({0.0, 1.0}, {0.0, 0.25});
  // |a-b| is 0.5 on [0,1), 0.25 on [1,2), 0.25 on [2,3).
  CHECK(a.integral_abs_diff(b, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
}
