#pragma once

namespace sird {

enum class MortalityKind { Constant, AffineSaturating };

/// Infection mortality rate as a function of the infected fraction.
/// Constant: phi(i) = base. Affine-saturating: phi(i) = min(base + slope*i, cap).
/// Must stay in (0, gamma] on [0,1].
struct MortalityCurve {
  MortalityKind kind = MortalityKind::Constant;
  double base = 0.01;
  double slope = 0.0;
  double cap = 0.0;  // clip level, affine case only

  double operator()(double infected) const;
  double lipschitz() const;  // slope for affine curves, 0 for constant
  double max_value() const;
};

struct ModelParams {
  double beta = 0.2;          // transmission rate per unit time
  double gamma = 1.0 / 14.0;  // recovery rate
  double theta = 0.8;         // lockdown effectiveness damping, in (0,1)
  double l_bar = 0.7;         // maximum lockdown fraction, in (0,1]
  double nu = 0.5;            // vaccine-arrival intensity
  double r = 0.05;            // discount rate
  double w = 1.0;             // output per active agent
  double chi = 5.0;           // death cost in output units
  MortalityCurve phi;

  double discount() const { return r + nu; }
  void validate() const;  // throws std::invalid_argument
};

/// Desk-scale defaults used by the CLI when no config is given. The model
/// itself fixes no numeric values; these are implementation placeholders.
ModelParams default_params();

/// Bounds and Lipschitz constants of the vector field and running cost.
struct ModelConstants {
  double field_bound;      // sup norm of the vector field over triangle x controls
  double field_lipschitz;  // Lipschitz constant of the field in the state
  double cost_bound;       // sup of the running cost
  double cost_lipschitz;   // Lipschitz constant of the running cost in the state
};

ModelConstants model_constants(const ModelParams& params);

}  // namespace sird
