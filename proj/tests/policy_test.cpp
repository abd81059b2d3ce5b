#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sird/csv.hpp"
#include "sird/hjb_solver.hpp"
#include "sird/policy.hpp"

using namespace sird;

namespace {

const ValueField& policy_field() {
  static const ValueField field = [] {
    SolverOptions options;
    options.subdivisions = 24;
    options.control_grid = 15;
    options.tol = 1e-7;
    return solve_value_function(default_params(), options);
  }();
  return field;
}

ValueField linear_in_i_field(double slope) {
  ValueField field{TriangularGrid(20), {}, SolveInfo{}};
  field.info.params = default_params();
  field.values.resize(field.grid.node_count());
  for (std::size_t idx = 0; idx < field.values.size(); ++idx)
    field.values[idx] = slope * field.grid.node(idx).i;
  return field;
}

}  // namespace

TEST_CASE("feedback is laissez-faire on both coordinate edges") {
  const ValueField& field = policy_field();
  const ModelParams& p = field.info.params;
  const FeedbackDecision on_i0 = feedback_law(field, {0.5, 0.0}, p);
  CHECK(on_i0.lockdown == 0.0);
  CHECK(on_i0.region == Region::CI);
  const FeedbackDecision on_s0 = feedback_law(field, {0.0, 0.4}, p);
  CHECK(on_s0.lockdown == 0.0);
  CHECK(on_s0.region == Region::CS);
  const FeedbackDecision origin = feedback_law(field, {0.0, 0.0}, p);
  CHECK(origin.lockdown == 0.0);
}

TEST_CASE("a steep value slope in i forces the full lockdown") {
  // Costate (0, 60) at (0.45, 0.45): pressure 0.045 exceeds the full-lockdown
  // cutoff 1/(2*0.8*0.44*60) ~ 0.024.
  const ValueField field = linear_in_i_field(60.0);
  const ModelParams& p = field.info.params;
  const FeedbackDecision decision = feedback_law(field, {0.45, 0.45}, p);
  CHECK(decision.region == Region::A4);
  CHECK(decision.lockdown == p.l_bar);
  // A shallower slope lands between the cutoffs and yields a partial lockdown.
  const ValueField mild = linear_in_i_field(30.0);
  const FeedbackDecision partial = feedback_law(mild, {0.45, 0.45}, p);
  CHECK(partial.region == Region::A3);
  CHECK(partial.lockdown > 0.0);
  CHECK(partial.lockdown < p.l_bar);
}

TEST_CASE("threshold ratio depends only on the lockdown cap") {
  const ModelParams p = default_params();
  const State x{0.4, 0.3};
  const Costate c{0.2, 1.7};
  const LockdownThresholds th = lockdown_thresholds(x, c, p);
  CHECK(th.k2 / th.k1 == doctest::Approx(1.0 / (1.0 - p.theta * p.l_bar)).epsilon(1e-12));
  CHECK(th.pressure == doctest::Approx(p.beta * x.s * x.i / (x.s + x.i)).epsilon(1e-14));
  // q <= p means non-positive thresholds and never a lockdown region.
  const LockdownThresholds down = lockdown_thresholds(x, {1.7, 0.2}, p);
  CHECK(down.k1 < 0.0);
  CHECK(down.k2 < 0.0);
  CHECK_THROWS_AS(lockdown_thresholds(x, {1.0, 1.0}, p), std::domain_error);
  CHECK_THROWS_AS(lockdown_thresholds({0.0, 0.3}, c, p), std::domain_error);
}

TEST_CASE("threshold comparisons agree with the region classifier") {
  const ModelParams p = default_params();
  std::mt19937_64 rng(6061);
  const auto uniform = [&](double a, double b) {
    return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 5000; ++trial) {
    double s = uniform(0.01, 0.98), i = uniform(0.01, 0.98);
    if (s + i > 0.99) continue;
    const Costate c{uniform(-10.0, 10.0), 0.0};
    Costate up = c;
    up.q = c.p + uniform(1e-6, 20.0);  // q > p so the thresholds are positive
    const LockdownThresholds th = lockdown_thresholds({s, i}, up, p);
    const Region region = classify({s, i}, up, p);
    if (th.pressure <= th.k1) CHECK(region == Region::A2);
    else if (th.pressure < th.k2) CHECK(region == Region::A3);
    else CHECK(region == Region::A4);
  }
}

TEST_CASE("closed loop from a disease-free start stays flat and free") {
  const ValueField& field = policy_field();
  const PolicyReport report =
      simulate_closed_loop(field, {0.8, 0.0}, 5.0, 0.05, field.info.params);
  CHECK(std::abs(report.realized_cost) <= 10.0 * field.info.tol);
  for (const PolicyStep& step : report.steps) {
    CHECK(step.lockdown == 0.0);
    CHECK(step.region == Region::CI);
    CHECK(step.x.s == doctest::Approx(0.8).epsilon(1e-14));
  }
}

TEST_CASE("closed-loop realized cost approximates the field value") {
  const ValueField& field = policy_field();
  const ModelParams& p = field.info.params;
  const double tol = 20.0 * (field.grid.spacing() + field.info.dt) *
                     model_constants(p).cost_bound / p.discount();
  for (const State x0 : {State{0.6, 0.2}, State{0.35, 0.3}, State{0.8, 0.1}}) {
    const PolicyReport report = simulate_closed_loop(field, x0, 30.0, 0.01, p);
    CHECK(std::abs(report.realized_cost - report.field_value_at_start) <= tol);
    // The running value stays near-constant along the synthesized policy.
    const double g0 = report.steps.front().running_value;
    for (const PolicyStep& step : report.steps)
      CHECK(std::abs(step.running_value - g0) <= tol);
  }
}

TEST_CASE("feedback is laissez-faire whenever q <= p") {
  const ModelParams p = default_params();
  // A value field sloping only in s keeps q < p everywhere.
  ValueField field{TriangularGrid(20), {}, SolveInfo{}};
  field.info.params = p;
  field.values.resize(field.grid.node_count());
  for (std::size_t idx = 0; idx < field.values.size(); ++idx)
    field.values[idx] = 2.0 * field.grid.node(idx).s;
  const FeedbackDecision decision = feedback_law(field, {0.4, 0.4}, p);
  CHECK(decision.region == Region::A1);
  CHECK(decision.lockdown == 0.0);

  // Along a solved-field closed loop: any instant with q <= p applies zero.
  const ValueField& solved = policy_field();
  const PolicyReport report =
      simulate_closed_loop(solved, {0.5, 0.25}, 25.0, 0.01, solved.info.params);
  for (const PolicyStep& step : report.steps) {
    const Costate c = finite_difference_costate(solved, step.x);
    if (c.q <= c.p) CHECK(step.lockdown == 0.0);
  }
}

TEST_CASE("applied control minimizes the instantaneous Hamiltonian") {
  const ValueField& field = policy_field();
  const ModelParams& p = field.info.params;
  const PolicyReport report = simulate_closed_loop(field, {0.55, 0.3}, 15.0, 0.02, p);
  const int m = 31;
  for (std::size_t k = 0; k < report.steps.size(); k += 25) {
    const PolicyStep& step = report.steps[k];
    const Costate c = finite_difference_costate(field, step.x);
    double grid_min = std::numeric_limits<double>::infinity();
    for (int g = 0; g < m; ++g)
      grid_min = std::min(grid_min, current_value_hamiltonian(
                                        step.x, c, p.l_bar * g / (m - 1), p));
    CHECK(current_value_hamiltonian(step.x, c, step.lockdown, p) <= grid_min + 1e-8);
  }
}

TEST_CASE("policy CSV lists regions and thresholds per instant") {
  const ValueField& field = policy_field();
  const PolicyReport report =
      simulate_closed_loop(field, {0.6, 0.2}, 1.0, 0.1, field.info.params);
  std::ostringstream out;
  write_policy_csv(report, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,s,i,l,region,K1,K2,pressure,running_cost\n", 0) == 0);
  bool found_tag = false;
  for (const char* tag : {"C_I", "C_S", "A_0", "A_1", "A_2", "A_3", "A_4"})
    found_tag = found_tag || text.find(tag) != std::string::npos;
  CHECK(found_tag);
}
