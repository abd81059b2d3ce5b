#include <doctest.h>

#include <cmath>

#include "sird/cost.hpp"
#include "sird/dynamics.hpp"
#include "sird/verify.hpp"

using namespace sird;

namespace {

ModelParams desk_params() { return default_params(); }

}  // namespace

TEST_CASE("running cost matches hand evaluation") {
  ModelParams p = desk_params();
  CHECK(running_cost({0.0, 0.0}, 0.3, p) == 0.0);
  // Lockdown term drops at l = 0.
  CHECK(running_cost({0.4, 0.2}, 0.0, p) ==
        doctest::Approx((p.w / p.r + p.chi) * 0.2 * p.phi(0.2)).epsilon(1e-14));
  // (0.5+0.2)*0.5*1 + 25*0.2*0.01 = 0.40
  CHECK(running_cost({0.5, 0.2}, 0.5, p) == doctest::Approx(0.40).epsilon(1e-14));
  CHECK_THROWS_AS(running_cost({0.8, 0.4}, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(running_cost({0.2, 0.2}, 2.0, p), std::domain_error);
}

TEST_CASE("cost vanishes along a disease-free uncontrolled path") {
  const CostValue cost =
      evaluate_cost({0.6, 0.0}, ControlSignal::constant(0.0), desk_params(), 1e-6);
  CHECK(cost.value == 0.0);
}

TEST_CASE("constant lockdown on a disease-free path has a geometric cost") {
  const ModelParams p = desk_params();
  const double s = 0.8, level = 0.4;
  const double delta = p.discount();
  const CostValue cost = evaluate_cost({s, 0.0}, ControlSignal::constant(level), p, 1e-6);
  // Exact value of the truncated integral, then the certified tail.
  const double truncated =
      s * level * p.w * (1.0 - std::exp(-delta * cost.horizon)) / delta;
  CHECK(cost.value == doctest::Approx(truncated).epsilon(1e-9));
  CHECK(std::abs(cost.value - s * level * p.w / delta) <= 1e-6 * p.w / p.r);
}

TEST_CASE("cost stays in the certified range") {
  const ModelParams p = desk_params();
  const double cap = model_constants(p).cost_bound / p.discount();
  const State starts[] = {{0.9, 0.1}, {0.3, 0.6}, {0.0, 1.0}, {0.5, 0.0}};
  for (const State& x0 : starts) {
    const double value =
        evaluate_cost(x0, ControlSignal({0.0, 3.0}, {0.6, 0.1}), p, 1e-6).value;
    CHECK(value >= 0.0);
    CHECK(value <= cap + 1e-9);
  }
}

TEST_CASE("cost is monotone in the death toll weight") {
  ModelParams lo = desk_params();
  ModelParams hi = desk_params();
  hi.chi = 2.0 * lo.chi;
  const ControlSignal control({0.0, 2.0}, {0.0, 0.5});
  const State x0{0.7, 0.2};
  CHECK(evaluate_cost(x0, control, lo, 1e-6).value <=
        evaluate_cost(x0, control, hi, 1e-6).value + 1e-12);
}

TEST_CASE("running cost is Lipschitz with the documented constant") {
  const ModelParams p = desk_params();
  const double lip = model_constants(p).cost_lipschitz;
  const State pairs[][2] = {{{0.1, 0.1}, {0.9, 0.05}},
                            {{0.0, 1.0}, {0.5, 0.5}},
                            {{0.33, 0.33}, {0.34, 0.33}}};
  for (const auto& pair : pairs) {
    const double gap = std::hypot(pair[0].s - pair[1].s, pair[0].i - pair[1].i);
    for (double l : {0.0, 0.3, 0.7})
      CHECK(std::abs(running_cost(pair[0], l, p) - running_cost(pair[1], l, p)) <=
            lip * gap + 1e-14);
  }
}

TEST_CASE("output objective without infection or lockdown is the full output value") {
  const ModelParams p = desk_params();
  const double value = evaluate_output_objective({0.6, 0.0, 0.4, 0.0},
                                                 ControlSignal::constant(0.0), p, 1e-4);
  CHECK(value == doctest::Approx(p.w / p.r).epsilon(1e-4));
}

TEST_CASE("output objective equals output value minus reduced cost") {
  const SuiteResult result = check_cost_identity(desk_params(), 8, 1e-4, 4242);
  CHECK(result.pass);
}

TEST_CASE("vanishing death weight reduces the objective to the mortality integral") {
  ModelParams p = desk_params();
  p.chi = 1e-8;
  const State x0{0.7, 0.2};
  const double objective =
      evaluate_output_objective({x0.s, x0.i, 1.0 - x0.s - x0.i, 0.0},
                                ControlSignal::constant(0.0), p, 1e-4);
  // Independent trapezoid quadrature of (w/r) e^{-(r+nu)t} I phi(I) along the
  // uncontrolled path.
  const double delta = p.discount();
  const double horizon = 2.0 * std::log(1e4) / delta;
  const Trajectory traj =
      integrate_forward(x0, ControlSignal::constant(0.0), horizon, 0.002, p);
  double mortality = 0.0;
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const auto rate = [&](std::size_t idx) {
      const State& x = traj.states[idx];
      return std::exp(-delta * traj.times[idx]) * x.i * p.phi(x.i);
    };
    mortality += 0.5 * (rate(k) + rate(k + 1)) * (traj.times[k + 1] - traj.times[k]);
  }
  const double expected = p.w / p.r - (p.w / p.r) * mortality;
  CHECK(objective == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("cost evaluation validates its inputs") {
  const ModelParams p = desk_params();
  CHECK_THROWS_AS(evaluate_cost({1.2, 0.0}, ControlSignal::constant(0.0), p, 1e-6),
                  std::domain_error);
  CHECK_THROWS_AS(evaluate_cost({0.5, 0.1}, ControlSignal::constant(0.0), p, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      evaluate_output_objective({0.5, 0.2, 0.2, 0.2}, ControlSignal::constant(0.0), p, 1e-4),
      std::domain_error);
}
