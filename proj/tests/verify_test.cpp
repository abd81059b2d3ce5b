#include <doctest.h>

#include <cmath>

#include "sird/hjb_solver.hpp"
#include "sird/verify.hpp"

using namespace sird;

namespace {

VerifyOptions light_options() {
  VerifyOptions options;
  options.seed = 20240105;
  options.bound_samples = 2000;
  options.lipschitz_samples = 2000;
  options.partition_samples = 20000;
  options.oracle_samples = 300;
  options.oracle_grid = 501;
  options.concavity_samples = 500;
  options.boundary_samples = 50;
  options.invariance_trials = 5;
  options.gronwall_trials = 8;
  options.backward_trials = 8;
  options.cost_trials = 4;
  options.dpp_trials = 6;
  options.closed_loop_trials = 3;
  options.g_monotone_trials = 2;
  options.field_n = 24;
  options.field_tol = 1e-7;
  options.control_grid = 15;
  return options;
}

}  // namespace

TEST_CASE("full property run passes on the default parameters") {
  const SuiteReport report = run_all(default_params(), light_options());
  CHECK(report.suites.size() == suite_names().size());
  for (const SuiteResult& suite : report.suites) {
    INFO(suite.name, " violation ", suite.max_violation, " tol ", suite.tolerance);
    CHECK(suite.pass);
  }
  CHECK(report.all_pass());
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  VerifyOptions options = light_options();
  options.only = {"dynamics", "hamiltonian"};
  const SuiteReport a = run_all(default_params(), options);
  const SuiteReport b = run_all(default_params(), options);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_text(a) == report_text(b));
  options.seed += 1;
  const SuiteReport c = run_all(default_params(), options);
  CHECK(report_csv(a) != report_csv(c));  // seed is part of the report
}

TEST_CASE("suite selection runs exactly the named module") {
  VerifyOptions options = light_options();
  options.only = {"hamiltonian"};
  const SuiteReport report = run_all(default_params(), options);
  CHECK(report.suites.size() == 6);
  for (const SuiteResult& suite : report.suites)
    CHECK(suite.name.rfind("hamiltonian.", 0) == 0);
}

TEST_CASE("unknown suite names and empty trial counts are rejected") {
  VerifyOptions options = light_options();
  options.only = {"nonsense"};
  CHECK_THROWS_AS(run_all(default_params(), options), std::invalid_argument);
  VerifyOptions zero = light_options();
  zero.gronwall_trials = 0;
  CHECK_THROWS_AS(run_all(default_params(), zero), std::invalid_argument);
}

TEST_CASE("a corrupted field no longer satisfies the one-step fixed point") {
  SolverOptions solver;
  solver.subdivisions = 24;
  solver.control_grid = 15;
  solver.tol = 1e-7;
  const ModelParams p = default_params();
  ValueField field = solve_value_function(p, solver);
  const double contraction = std::exp(-p.discount() * field.info.dt);
  const double healthy_tolerance = 10.0 * field.info.tol * (1.0 - contraction);

  const SweepResult before = bellman_update(field, p, field.info.dt, field.info.control_grid);
  CHECK(before.residual <= healthy_tolerance);

  for (double& v : field.values) v *= 1.1;
  const SweepResult after = bellman_update(field, p, field.info.dt, field.info.control_grid);
  CHECK(after.residual > healthy_tolerance);
}

TEST_CASE("report text carries the seed and a verdict line") {
  VerifyOptions options = light_options();
  options.only = {"cost"};
  const SuiteReport report = run_all(default_params(), options);
  const std::string text = report_text(report);
  CHECK(text.find("seed 20240105") != std::string::npos);
  CHECK(text.find("all pass: yes") != std::string::npos);
  const std::string csv = report_csv(report);
  CHECK(csv.rfind("suite,samples,max_violation,tolerance,pass,seed\n", 0) == 0);
}
