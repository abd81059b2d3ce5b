#include "sird/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sird {

bool FullState::on_simplex(double tol) const {
  return s >= -tol && i >= -tol && r_frac >= -tol && d >= -tol &&
         std::abs(s + i + r_frac + d - 1.0) <= tol;
}

ControlSignal::ControlSignal(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size())
    throw std::invalid_argument("control signal needs one value per breakpoint");
  if (breakpoints_.front() != 0.0)
    throw std::invalid_argument("control breakpoints must start at 0");
  for (std::size_t k = 1; k < breakpoints_.size(); ++k)
    if (!(breakpoints_[k] > breakpoints_[k - 1]))
      throw std::invalid_argument("control breakpoints must be strictly increasing");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("control values must be finite and nonnegative");
}

ControlSignal ControlSignal::constant(double level) {
  return ControlSignal({0.0}, {level});
}

double ControlSignal::operator()(double t) const {
  // Last interval whose start is <= t.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double ControlSignal::next_breakpoint_after(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.end()) return std::numeric_limits<double>::infinity();
  return *it;
}

void ControlSignal::validate(double l_bar) const {
  for (double v : values_)
    if (v > l_bar)
      throw std::invalid_argument("control value exceeds the lockdown cap");
}

double ControlSignal::integral_abs_diff(const ControlSignal& other, double t) const {
  double acc = 0.0;
  double left = 0.0;
  while (left < t) {
    const double right =
        std::min({t, next_breakpoint_after(left), other.next_breakpoint_after(left)});
    acc += std::abs((*this)(left)-other(left)) * (right - left);
    left = right;
  }
  return acc;
}

}  // namespace sird
