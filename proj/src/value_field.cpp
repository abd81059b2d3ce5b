#include "sird/value_field.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sird/errors.hpp"

namespace sird {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'R', 'D', 'F', 'L', 'D', '1'};

double one_sided(double near, double far, double step) { return (far - near) / step; }

double derivative_along(const ValueField& f, const State& x, bool s_direction) {
  const double h = f.grid.spacing();
  const auto at = [&](double ds, double di) {
    return f.grid.interpolate(f.values, {x.s + ds, x.i + di});
  };
  const double avail_fwd = 1.0 - x.s - x.i;
  const double avail_bwd = s_direction ? x.s : x.i;
  const auto shifted = [&](double step) { return s_direction ? at(step, 0.0) : at(0.0, step); };
  if (avail_fwd >= h - kTriangleTol && avail_bwd >= h - kTriangleTol)
    return (shifted(h) - shifted(-h)) / (2.0 * h);
  if (avail_fwd >= h - kTriangleTol) return one_sided(shifted(0.0), shifted(h), h);
  if (avail_bwd >= h - kTriangleTol) return one_sided(shifted(-h), shifted(0.0), h);
  // Squeezed against the boundary on both sides (near the (0,1) corner).
  const double step = std::max(avail_fwd, avail_bwd);
  if (step < 1e-14) return 0.0;
  if (avail_fwd >= avail_bwd) return one_sided(shifted(0.0), shifted(step), step);
  return one_sided(shifted(-step), shifted(0.0), step);
}

template <class T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated field file");
  return value;
}

}  // namespace

Costate finite_difference_costate(const ValueField& field, const State& x) {
  return {derivative_along(field, x, true), derivative_along(field, x, false)};
}

void save_field(const ValueField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const ModelParams& p = field.info.params;
  write_pod(out, p.beta);
  write_pod(out, p.gamma);
  write_pod(out, p.theta);
  write_pod(out, p.l_bar);
  write_pod(out, p.nu);
  write_pod(out, p.r);
  write_pod(out, p.w);
  write_pod(out, p.chi);
  write_pod(out, static_cast<std::int32_t>(p.phi.kind));
  write_pod(out, p.phi.base);
  write_pod(out, p.phi.slope);
  write_pod(out, p.phi.cap);
  write_pod(out, static_cast<std::int32_t>(field.grid.subdivisions()));
  write_pod(out, field.info.dt);
  write_pod(out, static_cast<std::int32_t>(field.info.control_grid));
  write_pod(out, field.info.tol);
  write_pod(out, static_cast<std::int32_t>(field.info.iterations));
  write_pod(out, field.info.final_residual);
  write_pod(out, static_cast<std::int64_t>(field.values.size()));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing " + path);
}

ValueField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open field file " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + " is not a value-field file");
  ModelParams p;
  p.beta = read_pod<double>(in);
  p.gamma = read_pod<double>(in);
  p.theta = read_pod<double>(in);
  p.l_bar = read_pod<double>(in);
  p.nu = read_pod<double>(in);
  p.r = read_pod<double>(in);
  p.w = read_pod<double>(in);
  p.chi = read_pod<double>(in);
  p.phi.kind = static_cast<MortalityKind>(read_pod<std::int32_t>(in));
  p.phi.base = read_pod<double>(in);
  p.phi.slope = read_pod<double>(in);
  p.phi.cap = read_pod<double>(in);
  const int n = read_pod<std::int32_t>(in);
  SolveInfo info;
  info.params = p;
  info.dt = read_pod<double>(in);
  info.control_grid = read_pod<std::int32_t>(in);
  info.tol = read_pod<double>(in);
  info.iterations = read_pod<std::int32_t>(in);
  info.final_residual = read_pod<double>(in);
  const auto count = read_pod<std::int64_t>(in);
  ValueField field{TriangularGrid(n), {}, info};
  if (count != static_cast<std::int64_t>(field.grid.node_count()))
    throw std::runtime_error(path + " value count does not match its grid");
  field.values.resize(static_cast<std::size_t>(count));
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field file " + path);
  return field;
}

bool params_equal(const ModelParams& a, const ModelParams& b) {
  return a.beta == b.beta && a.gamma == b.gamma && a.theta == b.theta &&
         a.l_bar == b.l_bar && a.nu == b.nu && a.r == b.r && a.w == b.w &&
         a.chi == b.chi && a.phi.kind == b.phi.kind && a.phi.base == b.phi.base &&
         a.phi.slope == b.phi.slope && a.phi.cap == b.phi.cap;
}

}  // namespace sird
