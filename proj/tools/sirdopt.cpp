#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sird/config.hpp"
#include "sird/cost.hpp"
#include "sird/csv.hpp"
#include "sird/dynamics.hpp"
#include "sird/errors.hpp"
#include "sird/hjb_solver.hpp"
#include "sird/policy.hpp"
#include "sird/verify.hpp"

namespace {

namespace fs = std::filesystem;
using sird::format_g12;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

sird::RunConfig resolve_config(const CommonArgs& args) {
  sird::RunConfig config =
      args.config_path.empty() ? sird::default_config() : sird::load_config(args.config_path);
  sird::apply_env_overrides(config);  // file, then environment, then flags
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.seed_set) config.seed = args.seed;
  if (args.workers > 0) config.workers = args.workers;
  config.finalize();
  config.params.validate();
  return config;
}

fs::path prepare_out(const sird::RunConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

sird::State parse_state(const std::string& spec) {
  const std::size_t comma = spec.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("state must be 's,i', got '" + spec + "'");
  return {std::stod(spec.substr(0, comma)), std::stod(spec.substr(comma + 1))};
}

/// Either a constant level ("0.3") or a breakpoint list ("0:0.3,12:0.6,30:0").
sird::ControlSignal parse_control(const std::string& spec) {
  if (spec.find(':') == std::string::npos)
    return sird::ControlSignal::constant(std::stod(spec));
  std::vector<double> breakpoints, values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("control segment must be 't:level', got '" + item + "'");
    breakpoints.push_back(std::stod(item.substr(0, colon)));
    values.push_back(std::stod(item.substr(colon + 1)));
  }
  return sird::ControlSignal(std::move(breakpoints), std::move(values));
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

int run_simulate(const CommonArgs& common, const std::string& x0_spec,
                 const std::string& control_spec, double horizon_flag, bool full) {
  const sird::RunConfig config = resolve_config(common);
  const fs::path dir = prepare_out(config);
  const sird::State x0 = parse_state(x0_spec);
  const sird::ControlSignal control = parse_control(control_spec);
  const double horizon = horizon_flag > 0.0 ? horizon_flag : config.simulate.horizon;

  std::ofstream csv(dir / "trajectory.csv");
  if (full) {
    const sird::FullState full_x0{x0.s, x0.i, 1.0 - x0.s - x0.i, 0.0};
    sird::write_trajectory_csv(
        sird::integrate_full(full_x0, control, horizon, config.simulate.dt, config.params),
        csv);
  } else {
    sird::write_trajectory_csv(
        sird::integrate_forward(x0, control, horizon, config.simulate.dt, config.params),
        csv);
  }
  const sird::CostValue cost =
      sird::evaluate_cost(x0, control, config.params, config.simulate.rel_tol,
                          config.simulate.dt);
  const double tail = config.simulate.rel_tol * config.params.w / config.params.r;
  std::cout << "trajectory written to " << (dir / "trajectory.csv").string() << "\n"
            << "J = " << format_g12(cost.value) << " (truncated at T="
            << format_g12(cost.horizon) << ", tail below " << format_g12(tail) << ")\n";
  return 0;
}

int run_solve(const CommonArgs& common, int n_flag, bool cauchy_check) {
  const sird::RunConfig config = resolve_config(common);
  const fs::path dir = prepare_out(config);
  sird::SolverOptions options;
  options.subdivisions = n_flag > 0 ? n_flag : config.grid.n;
  options.dt = config.grid.dt;
  options.control_grid = config.grid.control_grid;
  options.tol = config.grid.tol;
  options.max_iter = config.grid.max_iter;
  options.workers = config.workers;

  const sird::ValueField field = sird::solve_value_function(config.params, options);
  sird::save_field(field, (dir / "field.bin").string());
  const std::vector<double> residuals = sird::hjb_residuals(field, config.params);
  std::ofstream csv(dir / "field.csv");
  sird::write_field_csv(field, residuals, csv);

  const double cap =
      sird::model_constants(config.params).cost_bound / config.params.discount();
  double max_value = 0.0;
  for (double v : field.values) max_value = std::max(max_value, v);
  const sird::ResidualSummary summary = sird::summarize_residuals(field, residuals);
  std::cout << "solved n=" << options.subdivisions << " in " << field.info.iterations
            << " sweeps, residual " << format_g12(field.info.final_residual) << "\n"
            << "value bound: max " << format_g12(max_value) << " <= "
            << format_g12(cap) << (max_value <= cap + 1e-9 ? " ok" : " VIOLATED") << "\n"
            << "interior residual quantiles: median "
            << format_g12(summary.median_interior) << ", p90 "
            << format_g12(summary.p90_interior) << ", max "
            << format_g12(summary.max_interior) << "\n";

  if (cauchy_check) {
    sird::SolverOptions coarse = options;
    coarse.subdivisions = options.subdivisions / 2;
    const sird::ValueField half = sird::solve_value_function(config.params, coarse);
    double diff = 0.0;
    for (std::size_t idx = 0; idx < half.values.size(); ++idx)
      diff = std::max(diff, std::abs(half.values[idx] - field(half.grid.node(idx))));
    std::cout << "cauchy check n=" << coarse.subdivisions << "/" << options.subdivisions
              << ": sup diff " << format_g12(diff) << "\n";
  }
  std::cout << "field written to " << (dir / "field.bin").string() << "\n";
  return 0;
}

int run_policy(const CommonArgs& common, const std::string& field_path,
               const std::string& x0_spec, double horizon_flag) {
  const sird::RunConfig config = resolve_config(common);
  const fs::path dir = prepare_out(config);
  const std::string path =
      field_path.empty() ? (dir / "field.bin").string() : field_path;
  const sird::ValueField field = sird::load_field(path);
  if (!sird::params_equal(field.info.params, config.params))
    throw sird::ConfigError("field file " + path +
                            " was solved with different model parameters");
  const sird::State x0 = parse_state(x0_spec);
  const double horizon = horizon_flag > 0.0 ? horizon_flag : config.policy.horizon;
  const sird::PolicyReport report =
      sird::simulate_closed_loop(field, x0, horizon, config.policy.dt, config.params);
  std::ofstream csv(dir / "policy.csv");
  sird::write_policy_csv(report, csv);
  std::cout << "policy report written to " << (dir / "policy.csv").string() << "\n"
            << "realized cost " << format_g12(report.realized_cost)
            << " vs interpolated value " << format_g12(report.field_value_at_start)
            << " (gap " << format_g12(report.realized_cost - report.field_value_at_start)
            << ", horizon tail bound " << format_g12(report.tail_bound) << ")\n";
  return 0;
}

int run_verify(const CommonArgs& common, const std::vector<std::string>& suites) {
  const sird::RunConfig config = resolve_config(common);
  const fs::path dir = prepare_out(config);
  sird::VerifyOptions options = config.suites;
  options.only = suites;
  const sird::SuiteReport report = sird::run_all(config.params, options);
  const std::string text = sird::report_text(report);
  write_text(dir / "report.txt", text);
  write_text(dir / "report.csv", sird::report_csv(report));
  std::cout << text;
  return report.all_pass() ? 0 : 2;
}

int run_sweep(const CommonArgs& common) {
  const sird::RunConfig config = resolve_config(common);
  const fs::path dir = prepare_out(config);
  std::ofstream out(dir / "sweep.csv");
  out << "beta,theta,chi,V_at_x0,peak_i,total_deaths\n";
  const sird::State x0{config.sweep.x0_s, config.sweep.x0_i};
  for (double beta : config.sweep.beta)
    for (double theta : config.sweep.theta)
      for (double chi : config.sweep.chi) {
        sird::ModelParams params = config.params;
        params.beta = beta;
        params.theta = theta;
        params.chi = chi;
        params.validate();
        sird::SolverOptions options;
        options.subdivisions = config.grid.n;
        options.dt = config.grid.dt;
        options.control_grid = config.grid.control_grid;
        options.tol = config.grid.tol;
        options.max_iter = config.grid.max_iter;
        options.workers = config.workers;
        const sird::ValueField field = sird::solve_value_function(params, options);
        const sird::PolicyReport report = sird::simulate_closed_loop(
            field, x0, config.policy.horizon, config.policy.dt, params);
        double peak_i = 0.0;
        double deaths = 0.0;
        for (std::size_t k = 0; k < report.steps.size(); ++k) {
          const sird::PolicyStep& step = report.steps[k];
          peak_i = std::max(peak_i, step.x.i);
          if (k + 1 < report.steps.size()) {
            const sird::PolicyStep& next = report.steps[k + 1];
            const double rate_a = step.x.i * params.phi(step.x.i);
            const double rate_b = next.x.i * params.phi(next.x.i);
            deaths += 0.5 * (rate_a + rate_b) * (next.t - step.t);
          }
        }
        out << format_g12(beta) << ',' << format_g12(theta) << ',' << format_g12(chi)
            << ',' << format_g12(report.field_value_at_start) << ','
            << format_g12(peak_i) << ',' << format_g12(deaths) << '\n';
        std::cout << "sweep point beta=" << format_g12(beta)
                  << " theta=" << format_g12(theta) << " chi=" << format_g12(chi)
                  << " done\n";
      }
  std::cout << "summary written to " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-lockdown solver and verification suite for a controlled "
               "SIRD epidemic"};
  app.require_subcommand(1);

  CommonArgs common;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "configuration file");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "sampling seed")
        ->each([&](const std::string&) { common.seed_set = true; });
    cmd->add_option("--workers", common.workers, "parallel workers for sweeps");
  };

  std::string x0_spec = "0.99,0.01";
  std::string control_spec = "0";
  double horizon = 0.0;
  bool full = false;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a controlled trajectory");
  add_common(simulate);
  simulate->add_option("--x0", x0_spec, "initial state 's,i'");
  simulate->add_option("--control", control_spec,
                       "constant level or breakpoint list 't:level,...'");
  simulate->add_option("--horizon", horizon, "integration horizon");
  simulate->add_flag("--full", full, "integrate all four compartments");

  int n_flag = 0;
  bool cauchy = false;
  CLI::App* solve = app.add_subcommand("solve", "compute the value function");
  add_common(solve);
  solve->add_option("--n", n_flag, "grid subdivisions (overrides config)");
  solve->add_flag("--cauchy-check", cauchy, "also solve at n/2 and print the sup diff");

  std::string field_path;
  std::string policy_x0 = "0.9,0.05";
  double policy_horizon = 0.0;
  CLI::App* policy = app.add_subcommand("policy", "closed-loop feedback simulation");
  add_common(policy);
  policy->add_option("--field", field_path, "value-field file (default <out>/field.bin)");
  policy->add_option("--x0", policy_x0, "initial state 's,i'");
  policy->add_option("--horizon", policy_horizon, "simulation horizon");

  std::vector<std::string> suites;
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify);
  verify->add_option("--suite", suites, "suite name or module prefix (repeatable)");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter grid over beta, theta, chi");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(common, x0_spec, control_spec, horizon, full);
    if (solve->parsed()) return run_solve(common, n_flag, cauchy);
    if (policy->parsed()) return run_policy(common, field_path, policy_x0, policy_horizon);
    if (verify->parsed()) return run_verify(common, suites);
    if (sweep->parsed()) return run_sweep(common);
  } catch (const sird::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const sird::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual "
              << format_g12(e.residual) << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
