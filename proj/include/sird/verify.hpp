#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sird/hamiltonian.hpp"
#include "sird/params.hpp"
#include "sird/value_field.hpp"

namespace sird {

struct GridMin {
  double value = 0.0;
  double argmin = 0.0;
};

/// Exhaustive minimization of the current-value Hamiltonian over a uniform
/// lockdown grid. Deliberately shares no code with the closed-form branches:
/// it evaluates the defining expression directly.
GridMin oracle_hamiltonian(const State& x, const Costate& c, const ModelParams& params,
                           int grid_points);

struct SuiteResult {
  std::string name;
  long samples = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string note;
};

struct SuiteReport {
  std::uint64_t base_seed = 0;
  std::vector<SuiteResult> suites;
  bool all_pass() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1234;
  int workers = 1;
  // analytic property suites
  long bound_samples = 100000;
  long lipschitz_samples = 100000;
  long partition_samples = 1000000;
  long oracle_samples = 100000;
  int oracle_grid = 10000;
  long concavity_samples = 10000;
  long boundary_samples = 2000;
  int invariance_trials = 50;
  int gronwall_trials = 100;
  int backward_trials = 50;
  int cost_trials = 100;
  double cost_rel_tol = 1e-4;
  // suites needing a solved value field
  int field_n = 60;
  double field_tol = 1e-6;
  int control_grid = 21;
  int dpp_trials = 50;
  int closed_loop_trials = 20;
  int g_monotone_trials = 10;
  std::vector<std::string> only;  // suite names or module prefixes; empty = all

  void validate() const;  // throws std::invalid_argument on zero-size counts
};

const std::vector<std::string>& suite_names();

/// Runs every property suite (or the selected subset) with seeded sampling;
/// each row records samples, worst violation, tolerance and its own seed.
SuiteReport run_all(const ModelParams& params, const VerifyOptions& options);

// Individual checks, reusable without the full report.
SuiteResult check_gronwall(const ModelParams& params, int trials, std::uint64_t seed);
SuiteResult check_cost_identity(const ModelParams& params, int trials, double rel_tol,
                                std::uint64_t seed);
std::vector<SuiteResult> check_dpp(const ValueField& field, const ModelParams& params,
                                   int trials, std::uint64_t seed);

std::string report_text(const SuiteReport& report);
std::string report_csv(const SuiteReport& report);

}  // namespace sird
