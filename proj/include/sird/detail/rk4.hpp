#pragma once

#include <array>

namespace sird::detail {

/// One classical fourth-order step of y' = f(t, y) over [t, t+h].
template <std::size_t N, class F>
std::array<double, N> rk4_step(const std::array<double, N>& y, double t, double h, F&& f) {
  std::array<double, N> k1 = f(t, y);
  std::array<double, N> y2;
  for (std::size_t n = 0; n < N; ++n) y2[n] = y[n] + 0.5 * h * k1[n];
  std::array<double, N> k2 = f(t + 0.5 * h, y2);
  std::array<double, N> y3;
  for (std::size_t n = 0; n < N; ++n) y3[n] = y[n] + 0.5 * h * k2[n];
  std::array<double, N> k3 = f(t + 0.5 * h, y3);
  std::array<double, N> y4;
  for (std::size_t n = 0; n < N; ++n) y4[n] = y[n] + h * k3[n];
  std::array<double, N> k4 = f(t + h, y4);
  std::array<double, N> out;
  for (std::size_t n = 0; n < N; ++n)
    out[n] = y[n] + (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  return out;
}

}  // namespace sird::detail
