#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sird/grid.hpp"

using namespace sird;

TEST_CASE("node counts follow the triangular formula") {
  CHECK(TriangularGrid(2).node_count() == 6);
  CHECK(TriangularGrid(200).node_count() == 20301);
  CHECK_THROWS_AS(TriangularGrid(1), std::invalid_argument);

  const TriangularGrid grid(7);
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx) {
    CHECK(grid.node_j(idx) + grid.node_k(idx) <= 7);
    CHECK(grid.node_index(grid.node_j(idx), grid.node_k(idx)) == idx);
  }
  CHECK_THROWS_AS(grid.node_index(5, 5), std::out_of_range);
}

TEST_CASE("interpolation is exact on nodes") {
  const TriangularGrid grid(9);
  std::vector<double> values(grid.node_count());
  std::mt19937_64 rng(11);
  for (double& v : values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx)
    CHECK(grid.interpolate(values, grid.node(idx)) == doctest::Approx(values[idx]).epsilon(1e-15));
}

TEST_CASE("interpolation reproduces affine functions everywhere") {
  const TriangularGrid grid(13);
  const auto f = [](const State& x) { return 0.7 - 1.3 * x.s + 2.9 * x.i; };
  std::vector<double> values(grid.node_count());
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx)
    values[idx] = f(grid.node(idx));
  std::mt19937_64 rng(22);
  const auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 2000; ++trial) {
    double a = uniform(), b = uniform();
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    CHECK(grid.interpolate(values, {a, b}) == doctest::Approx(f({a, b})).epsilon(1e-12));
  }
  // Edge points and vertices included.
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(grid.interpolate(values, {t, 1.0 - t}) ==
          doctest::Approx(f({t, 1.0 - t})).epsilon(1e-12));
    CHECK(grid.interpolate(values, {t, 0.0}) == doctest::Approx(f({t, 0.0})).epsilon(1e-12));
    CHECK(grid.interpolate(values, {0.0, t}) == doctest::Approx(f({0.0, t})).epsilon(1e-12));
  }
}

TEST_CASE("edge midpoints average the endpoint values") {
  const TriangularGrid grid(4);
  std::vector<double> values(grid.node_count(), 0.0);
  values[grid.node_index(1, 2)] = 2.0;
  values[grid.node_index(2, 2)] = 5.0;
  CHECK(grid.interpolate(values, {0.375, 0.5}) == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("cell location breaks ties toward the lower cell") {
  const TriangularGrid grid(4);
  const TriangularGrid::CellRef cell = grid.locate({0.125, 0.125});  // fx+fy = 1 exactly
  CHECK(cell.j == 0);
  CHECK(cell.k == 0);
  CHECK_FALSE(cell.upper);
  // Hypotenuse nodes resolve to a valid lower cell.
  const TriangularGrid::CellRef hyp = grid.locate({0.5, 0.5});
  CHECK(hyp.j + hyp.k <= 3);
  CHECK_FALSE(hyp.upper);
}

TEST_CASE("interpolation clamps rounding noise but rejects real violations") {
  const TriangularGrid grid(6);
  std::vector<double> values(grid.node_count(), 1.0);
  CHECK(grid.interpolate(values, {-1e-11, 0.5}) == doctest::Approx(1.0));
  CHECK(grid.interpolate(values, {0.5, 0.5 + 1e-11}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(grid.interpolate(values, {-1e-8, 0.5}), std::domain_error);
  CHECK_THROWS_AS(grid.interpolate(values, {0.7, 0.5}), std::domain_error);
}
