#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sird/state.hpp"

namespace sird {

/// Uniform triangulation of the state triangle: nodes (j/n, k/n) with
/// j,k >= 0, j+k <= n, split into right-triangle cells. Boundary ties in
/// point location go to the lower-index cell.
class TriangularGrid {
 public:
  explicit TriangularGrid(int subdivisions);  // throws std::invalid_argument if n < 2

  int subdivisions() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  std::size_t node_count() const { return node_j_.size(); }

  std::size_t node_index(int j, int k) const;  // throws std::out_of_range
  State node(std::size_t index) const;
  int node_j(std::size_t index) const { return node_j_[index]; }
  int node_k(std::size_t index) const { return node_k_[index]; }
  bool is_valid_node(int j, int k) const {
    return j >= 0 && k >= 0 && j + k <= n_;
  }

  struct CellRef {
    int j = 0;
    int k = 0;
    bool upper = false;  // upper half of the unit square cell (j,k)
  };
  CellRef locate(const State& x) const;  // expects x clamped into the triangle

  /// Barycentric-linear interpolation of nodal values; exact on nodes and on
  /// affine functions. Throws std::domain_error outside the triangle (after
  /// the clamping tolerance).
  double interpolate(std::span<const double> values, const State& x) const;

 private:
  int n_;
  std::vector<std::size_t> row_offset_;  // first index of row k
  std::vector<int> node_j_;
  std::vector<int> node_k_;
};

}  // namespace sird
