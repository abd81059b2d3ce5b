#include "sird/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sird/errors.hpp"

namespace sird {

TriangularGrid::TriangularGrid(int subdivisions) : n_(subdivisions) {
  if (n_ < 2) throw std::invalid_argument("grid needs at least 2 subdivisions");
  row_offset_.reserve(static_cast<std::size_t>(n_) + 1);
  std::size_t offset = 0;
  for (int k = 0; k <= n_; ++k) {
    row_offset_.push_back(offset);
    offset += static_cast<std::size_t>(n_ - k + 1);
  }
  node_j_.reserve(offset);
  node_k_.reserve(offset);
  for (int k = 0; k <= n_; ++k)
    for (int j = 0; j <= n_ - k; ++j) {
      node_j_.push_back(j);
      node_k_.push_back(k);
    }
}

std::size_t TriangularGrid::node_index(int j, int k) const {
  if (!is_valid_node(j, k))
    throw std::out_of_range("node (" + std::to_string(j) + ", " + std::to_string(k) +
                            ") outside the triangulation");
  return row_offset_[static_cast<std::size_t>(k)] + static_cast<std::size_t>(j);
}

State TriangularGrid::node(std::size_t index) const {
  return {static_cast<double>(node_j_[index]) / n_,
          static_cast<double>(node_k_[index]) / n_};
}

TriangularGrid::CellRef TriangularGrid::locate(const State& x) const {
  const double u = x.s * n_;
  const double v = x.i * n_;
  int j = std::clamp(static_cast<int>(std::floor(u)), 0, n_ - 1);
  int k = std::clamp(static_cast<int>(std::floor(v)), 0, n_ - 1);
  // j+k can only exceed n-1 when the point is a hypotenuse node; shift one
  // index back so a valid lower cell contains it.
  if (j + k > n_ - 1) {
    if (j > 0)
      --j;
    else
      --k;
  }
  const double fx = u - j;
  const double fy = v - k;
  // Upper cells only exist for j+k <= n-2; rounding can push fx+fy just past
  // 1 on the hypotenuse row, where the lower cell is the right owner.
  return {j, k, fx + fy > 1.0 && j + k <= n_ - 2};
}

double TriangularGrid::interpolate(std::span<const double> values, const State& x) const {
  double s = x.s, i = x.i;
  if (!State{s, i}.in_triangle())
    throw std::domain_error("interpolation point outside the triangle");
  s = std::max(s, 0.0);
  i = std::max(i, 0.0);
  if (s + i > 1.0) {
    const double scale = 1.0 / (s + i);
    s *= scale;
    i *= scale;
  }
  const CellRef cell = locate({s, i});
  const double fx = s * n_ - cell.j;
  const double fy = i * n_ - cell.k;
  const auto at = [&](int j, int k) {
    return values[row_offset_[static_cast<std::size_t>(k)] + static_cast<std::size_t>(j)];
  };
  if (!cell.upper)
    return at(cell.j, cell.k) * (1.0 - fx - fy) + at(cell.j + 1, cell.k) * fx +
           at(cell.j, cell.k + 1) * fy;
  return at(cell.j + 1, cell.k) * (1.0 - fy) + at(cell.j, cell.k + 1) * (1.0 - fx) +
         at(cell.j + 1, cell.k + 1) * (fx + fy - 1.0);
}

}  // namespace sird
