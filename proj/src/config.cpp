#include "sird/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sird/errors.hpp"

namespace sird {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& value, int line) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("not a number: '" + value + "'", line);
  return v;
}

long parse_long(const std::string& value, int line) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("not an integer: '" + value + "'", line);
  return v;
}

std::uint64_t parse_u64(const std::string& value, int line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("not an unsigned integer: '" + value + "'", line);
  return v;
}

std::vector<double> parse_list(const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError("empty list: '" + value + "'", line);
  return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"params", "beta"},          {"params", "gamma"},
      {"params", "theta"},         {"params", "l_bar"},
      {"params", "nu"},            {"params", "r"},
      {"params", "w"},             {"params", "chi"},
      {"params", "phi_kind"},      {"params", "phi_base"},
      {"params", "phi_slope"},     {"params", "phi_cap"},
      {"grid", "n"},               {"grid", "control_grid"},
      {"grid", "dt"},              {"grid", "tol"},
      {"grid", "max_iter"},        {"simulate", "dt"},
      {"simulate", "horizon"},     {"simulate", "rel_tol"},
      {"policy", "horizon"},       {"policy", "dt"},
      {"run", "workers"},          {"run", "seed"},
      {"run", "out"},              {"suites", "field_n"},
      {"suites", "field_tol"},     {"suites", "control_grid"},
      {"suites", "bound_samples"}, {"suites", "lipschitz_samples"},
      {"suites", "partition_samples"}, {"suites", "oracle_samples"},
      {"suites", "oracle_grid"},   {"suites", "concavity_samples"},
      {"suites", "boundary_samples"}, {"suites", "invariance_trials"},
      {"suites", "gronwall_trials"},  {"suites", "backward_trials"},
      {"suites", "cost_trials"},   {"suites", "cost_rel_tol"},
      {"suites", "dpp_trials"},    {"suites", "closed_loop_trials"},
      {"suites", "g_monotone_trials"}, {"sweep", "beta"},
      {"sweep", "theta"},          {"sweep", "chi"},
      {"sweep", "x0_s"},           {"sweep", "x0_i"},
  };
  return keys;
}

void apply_config_value(RunConfig& c, const std::string& section, const std::string& key,
                        const std::string& value, int line) {
  const auto num = [&] { return parse_double(value, line); };
  const auto integer = [&] { return static_cast<int>(parse_long(value, line)); };
  const auto count = [&] { return parse_long(value, line); };
  if (section == "params") {
    if (key == "beta") c.params.beta = num();
    else if (key == "gamma") c.params.gamma = num();
    else if (key == "theta") c.params.theta = num();
    else if (key == "l_bar") c.params.l_bar = num();
    else if (key == "nu") c.params.nu = num();
    else if (key == "r") c.params.r = num();
    else if (key == "w") c.params.w = num();
    else if (key == "chi") c.params.chi = num();
    else if (key == "phi_kind") {
      if (value == "constant") c.params.phi.kind = MortalityKind::Constant;
      else if (value == "affine") c.params.phi.kind = MortalityKind::AffineSaturating;
      else throw ConfigError("phi_kind must be 'constant' or 'affine'", line);
    } else if (key == "phi_base") c.params.phi.base = num();
    else if (key == "phi_slope") c.params.phi.slope = num();
    else if (key == "phi_cap") c.params.phi.cap = num();
    else throw ConfigError("unknown key '" + key + "' in [params]", line);
  } else if (section == "grid") {
    if (key == "n") c.grid.n = integer();
    else if (key == "control_grid") c.grid.control_grid = integer();
    else if (key == "dt") c.grid.dt = num();
    else if (key == "tol") c.grid.tol = num();
    else if (key == "max_iter") c.grid.max_iter = integer();
    else throw ConfigError("unknown key '" + key + "' in [grid]", line);
  } else if (section == "simulate") {
    if (key == "dt") c.simulate.dt = num();
    else if (key == "horizon") c.simulate.horizon = num();
    else if (key == "rel_tol") c.simulate.rel_tol = num();
    else throw ConfigError("unknown key '" + key + "' in [simulate]", line);
  } else if (section == "policy") {
    if (key == "horizon") c.policy.horizon = num();
    else if (key == "dt") c.policy.dt = num();
    else throw ConfigError("unknown key '" + key + "' in [policy]", line);
  } else if (section == "run") {
    if (key == "workers") c.workers = integer();
    else if (key == "seed") c.seed = parse_u64(value, line);
    else if (key == "out") c.out_dir = value;
    else throw ConfigError("unknown key '" + key + "' in [run]", line);
  } else if (section == "suites") {
    if (key == "field_n") c.suites.field_n = integer();
    else if (key == "field_tol") c.suites.field_tol = num();
    else if (key == "control_grid") c.suites.control_grid = integer();
    else if (key == "bound_samples") c.suites.bound_samples = count();
    else if (key == "lipschitz_samples") c.suites.lipschitz_samples = count();
    else if (key == "partition_samples") c.suites.partition_samples = count();
    else if (key == "oracle_samples") c.suites.oracle_samples = count();
    else if (key == "oracle_grid") c.suites.oracle_grid = integer();
    else if (key == "concavity_samples") c.suites.concavity_samples = count();
    else if (key == "boundary_samples") c.suites.boundary_samples = count();
    else if (key == "invariance_trials") c.suites.invariance_trials = integer();
    else if (key == "gronwall_trials") c.suites.gronwall_trials = integer();
    else if (key == "backward_trials") c.suites.backward_trials = integer();
    else if (key == "cost_trials") c.suites.cost_trials = integer();
    else if (key == "cost_rel_tol") c.suites.cost_rel_tol = num();
    else if (key == "dpp_trials") c.suites.dpp_trials = integer();
    else if (key == "closed_loop_trials") c.suites.closed_loop_trials = integer();
    else if (key == "g_monotone_trials") c.suites.g_monotone_trials = integer();
    else throw ConfigError("unknown key '" + key + "' in [suites]", line);
  } else if (section == "sweep") {
    if (key == "beta") c.sweep.beta = parse_list(value, line);
    else if (key == "theta") c.sweep.theta = parse_list(value, line);
    else if (key == "chi") c.sweep.chi = parse_list(value, line);
    else if (key == "x0_s") c.sweep.x0_s = num();
    else if (key == "x0_i") c.sweep.x0_i = num();
    else throw ConfigError("unknown key '" + key + "' in [sweep]", line);
  } else {
    throw ConfigError("unknown section [" + section + "]", line);
  }
}

void RunConfig::finalize() {
  if (params.phi.kind == MortalityKind::AffineSaturating && params.phi.cap == 0.0)
    params.phi.cap = params.gamma;
  suites.seed = seed;
  suites.workers = workers;
}

RunConfig default_config() {
  RunConfig config;
  config.params = default_params();
  config.finalize();
  return config;
}

RunConfig parse_config(std::istream& in, const std::string& source_name) {
  RunConfig config;
  config.params = default_params();
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(source_name + ": unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ": expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(source_name + ": key '" + key + "' outside any section", line_no);
    apply_config_value(config, section, key, value, line_no);
  }
  config.finalize();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  RunConfig config = parse_config(in, path);
  apply_env_overrides(config);
  return config;
}

void apply_env_overrides(RunConfig& config) {
  for (const auto& [section, key] : config_keys()) {
    std::string name = "SIRDOPT_" + section + "_" + key;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return std::toupper(ch); });
    if (const char* value = std::getenv(name.c_str()))
      apply_config_value(config, section, key, value);
  }
  config.finalize();
}

}  // namespace sird
