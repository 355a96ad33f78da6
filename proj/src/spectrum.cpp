#include "branchsolve/spectrum.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>

#include "branchsolve/error.hpp"
#include "branchsolve/parallel.hpp"

namespace branchsolve {

namespace {

std::vector<int> plane_dims(const Grid& grid) {
  std::vector<int> dims{grid.n_theta_hat()};
  for (int d = 0; d < grid.y_dims(); ++d) dims.push_back(grid.n_y(d));
  return dims;
}

// The half-offset angular nodes contribute exp(-i pi m / N_theta_hat).
cplx half_shift(int m, int n) { return std::polar(1.0, -std::numbers::pi * m / n); }

}  // namespace

ModeSpectrum::ModeSpectrum(Grid grid, int components)
    : grid_(std::move(grid)),
      components_(components),
      modes_(static_cast<std::size_t>(grid_.n_theta_hat()) * grid_.y_count()),
      data_(static_cast<std::size_t>(components) * grid_.n_rhat() * modes_) {}

int ModeSpectrum::angular_mode(std::size_t slot) const {
  return signed_frequency(static_cast<int>(slot / grid_.y_count()), grid_.n_theta_hat());
}

std::vector<int> ModeSpectrum::y_mode(std::size_t slot) const {
  auto idx = grid_.y_multi_index(slot % grid_.y_count());
  for (int d = 0; d < grid_.y_dims(); ++d) idx[d] = signed_frequency(idx[d], grid_.n_y(d));
  return idx;
}

double ModeSpectrum::kappa2(std::size_t slot) const {
  const auto z = y_mode(slot);
  double k2 = 0.0;
  for (int d = 0; d < grid_.y_dims(); ++d) {
    const double kap = 2.0 * std::numbers::pi * z[d] / grid_.rho(d);
    k2 += kap * kap;
  }
  return k2;
}

bool ModeSpectrum::nyquist(std::size_t slot) const {
  if (is_nyquist(angular_mode(slot), grid_.n_theta_hat())) return true;
  const auto z = y_mode(slot);
  for (int d = 0; d < grid_.y_dims(); ++d)
    if (is_nyquist(z[d], grid_.n_y(d))) return true;
  return false;
}

std::size_t ModeSpectrum::slot(int m, std::span<const int> z) const {
  const int nth = grid_.n_theta_hat();
  if (signed_frequency(((m % nth) + nth) % nth, nth) != m)
    throw ResolutionError(fmt::format("angular mode {} is not resolved by {} nodes", m, nth));
  if (z.size() != static_cast<std::size_t>(grid_.y_dims()))
    throw DimensionError("y-mode has the wrong number of entries");
  std::vector<int> idx(z.size());
  for (int d = 0; d < grid_.y_dims(); ++d) {
    const int n = grid_.n_y(d);
    idx[d] = ((z[d] % n) + n) % n;
    if (signed_frequency(idx[d], n) != z[d])
      throw ResolutionError(fmt::format("y-mode {} is not resolved by {} nodes", z[d], n));
  }
  return static_cast<std::size_t>((m % nth + nth) % nth) * grid_.y_count() + grid_.y_flat_index(idx);
}

void analyze_plane(const Grid& grid, std::span<cplx> plane) {
  const auto plan = dft_plan(plane_dims(grid));
  plan->forward(plane);
  const int nth = grid.n_theta_hat();
  const std::size_t ny = grid.y_count();
  const double inv = 1.0 / static_cast<double>(plane.size());
  for (int b = 0; b < nth; ++b) {
    const cplx s = half_shift(signed_frequency(b, nth), nth) * inv;
    for (std::size_t y = 0; y < ny; ++y) plane[b * ny + y] *= s;
  }
}

void synthesize_plane(const Grid& grid, std::span<cplx> plane) {
  const int nth = grid.n_theta_hat();
  const std::size_t ny = grid.y_count();
  for (int b = 0; b < nth; ++b) {
    const cplx s = std::conj(half_shift(signed_frequency(b, nth), nth));
    for (std::size_t y = 0; y < ny; ++y) plane[b * ny + y] *= s;
  }
  dft_plan(plane_dims(grid))->backward(plane);
}

ModeSpectrum analyze(const UnfoldedField& g, int threads) {
  const Grid& grid = g.grid();
  ModeSpectrum s(grid, g.components());
  const int rings = grid.rings();
  const std::size_t modes = s.mode_count();
  const std::size_t ny = grid.y_count();
  parallel_for(static_cast<std::size_t>(g.components()) * rings, threads, [&](std::size_t task) {
    const int c = static_cast<int>(task / rings);
    const int i = static_cast<int>(task % rings);
    std::vector<cplx> plane(modes);
    for (int b = 0; b < grid.n_theta_hat(); ++b)
      for (std::size_t y = 0; y < ny; ++y) plane[b * ny + y] = g.at(c, i, b, y);
    analyze_plane(grid, plane);
    for (std::size_t m = 0; m < modes; ++m) s.at(c, i + 1, m) = plane[m];
  });
  // axis: only the m = 0 column is populated
  const auto ydims = std::vector<int>(grid.spec().n_y.begin(), grid.spec().n_y.end());
  for (int c = 0; c < g.components(); ++c) {
    std::vector<cplx> line(ny);
    for (std::size_t y = 0; y < ny; ++y) line[y] = g.axis(c, y);
    dft_plan(ydims)->forward(line);
    for (std::size_t y = 0; y < ny; ++y) s.at(c, 0, y) = line[y] / static_cast<double>(ny);
  }
  return s;
}

UnfoldedField synthesize(const ModeSpectrum& s, int threads) {
  const Grid& grid = s.grid();
  UnfoldedField g(grid, s.components());
  const int rings = grid.rings();
  const std::size_t modes = s.mode_count();
  const std::size_t ny = grid.y_count();
  parallel_for(static_cast<std::size_t>(s.components()) * rings, threads, [&](std::size_t task) {
    const int c = static_cast<int>(task / rings);
    const int i = static_cast<int>(task % rings);
    std::vector<cplx> plane(modes);
    for (std::size_t m = 0; m < modes; ++m) plane[m] = s.at(c, i + 1, m);
    synthesize_plane(grid, plane);
    for (int b = 0; b < grid.n_theta_hat(); ++b)
      for (std::size_t y = 0; y < ny; ++y) g.at(c, i, b, y) = plane[b * ny + y].real();
  });
  const auto ydims = std::vector<int>(grid.spec().n_y.begin(), grid.spec().n_y.end());
  for (int c = 0; c < s.components(); ++c) {
    std::vector<cplx> line(ny);
    for (std::size_t y = 0; y < ny; ++y) line[y] = s.at(c, 0, y);
    dft_plan(ydims)->backward(line);
    for (std::size_t y = 0; y < ny; ++y) g.axis(c, y) = line[y].real();
  }
  return g;
}

}  // namespace branchsolve
