#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "sird/params.hpp"
#include "sird/verify.hpp"

namespace sird {

struct GridConfig {
  int n = 100;
  int control_grid = 21;
  double dt = 0.0;  // 0 selects the solver default tied to the spacing
  double tol = 1e-6;
  int max_iter = 200000;
};

struct SimulateConfig {
  double dt = 0.01;
  double horizon = 40.0;
  double rel_tol = 1e-4;
};

struct PolicyRunConfig {
  double horizon = 40.0;
  double dt = 0.01;
};

struct SweepConfig {
  std::vector<double> beta{0.2};
  std::vector<double> theta{0.8};
  std::vector<double> chi{5.0};
  double x0_s = 0.9;
  double x0_i = 0.05;
};

/// One structured text file fully determines a run (flat key = value lines
/// under [section] headers; # starts a comment).
struct RunConfig {
  ModelParams params;
  GridConfig grid;
  SimulateConfig simulate;
  PolicyRunConfig policy;
  VerifyOptions suites;
  SweepConfig sweep;
  int workers = 1;
  std::uint64_t seed = 1234;
  std::string out_dir = ".";

  void finalize();  // resolve derived defaults, propagate seed/workers
};

RunConfig default_config();
RunConfig parse_config(std::istream& in, const std::string& source_name);
RunConfig load_config(const std::string& path);  // file, then env overrides

/// Every key may be overridden through SIRDOPT_<SECTION>_<KEY>.
void apply_env_overrides(RunConfig& config);

void apply_config_value(RunConfig& config, const std::string& section,
                        const std::string& key, const std::string& value, int line = 0);

const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace sird
