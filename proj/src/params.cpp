#include "sird/params.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sird {

double MortalityCurve::operator()(double infected) const {
  const double i = std::clamp(infected, 0.0, 1.0);
  if (kind == MortalityKind::Constant) return base;
  return std::min(base + slope * i, cap);
}

double MortalityCurve::lipschitz() const {
  return kind == MortalityKind::AffineSaturating ? slope : 0.0;
}

double MortalityCurve::max_value() const {
  if (kind == MortalityKind::Constant) return base;
  return std::min(base + slope, cap);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void ModelParams::validate() const {
  require(beta > 0.0, "beta must be positive");
  require(gamma > 0.0, "gamma must be positive");
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0,1)");
  require(l_bar > 0.0 && l_bar <= 1.0, "l_bar must lie in (0,1]");
  require(nu > 0.0, "nu must be positive");
  require(r > 0.0, "r must be positive");
  require(w > 0.0, "w must be positive");
  require(chi > 0.0, "chi must be positive");
  require(phi.base > 0.0, "phi base must be positive");
  if (phi.kind == MortalityKind::Constant) {
    require(phi.base <= gamma, "constant mortality rate must not exceed gamma");
  } else {
    require(phi.slope >= 0.0, "phi slope must be nonnegative");
    require(phi.cap > 0.0 && phi.cap <= gamma, "phi cap must lie in (0, gamma]");
    require(phi.base <= phi.cap, "phi base must not exceed its cap");
  }
}

ModelParams default_params() {
  ModelParams p;
  p.phi.kind = MortalityKind::Constant;
  p.phi.base = 0.01;
  return p;
}

ModelConstants model_constants(const ModelParams& p) {
  const double m_phi = p.phi.lipschitz();
  const double wr_chi = p.w / p.r + p.chi;
  return ModelConstants{
      3.0 * (p.beta + p.gamma),
      2.0 * (p.beta + p.gamma + m_phi),
      p.l_bar * p.w + wr_chi * p.gamma,
      2.0 * (p.l_bar * p.w + wr_chi * (p.gamma + m_phi)),
  };
}

}  // namespace sird
