#include "branchsolve/generators.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>

#include "branchsolve/error.hpp"
#include "branchsolve/radial.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> y_mode_or_zero(const Grid& grid, std::vector<int> z) {
  if (z.empty()) z.assign(grid.y_dims(), 0);
  if (z.size() != static_cast<std::size_t>(grid.y_dims())) throw DimensionError("y-mode needs n-2 entries");
  return z;
}

double y_phase(const Grid& grid, const std::vector<int>& z, std::size_t y) {
  const auto idx = grid.y_multi_index(y);
  double arg = 0.0;
  for (int d = 0; d < grid.y_dims(); ++d) arg += kTwoPi * z[d] * grid.y(d, idx[d]) / grid.rho(d);
  return arg;
}

}  // namespace

SheetedField gen_branched_harmonic(const Grid& grid, int m, cplx c, std::vector<int> z, double amp,
                                   bool allow_inadmissible) {
  z = y_mode_or_zero(grid, std::move(z));
  if (!allow_inadmissible && !mode_admissible(m, z, grid.q(), grid.k()))
    throw InvalidProblem(fmt::format("mode m={} is not admissible for q={}, k={}", m, grid.q(), grid.k()));
  bool modulated = false;
  for (int v : z) modulated = modulated || v != 0;
  UnfoldedField u(grid, 1);
  for (int i = 0; i < grid.rings(); ++i) {
    const double rm = std::pow(grid.rhat(i), m);
    for (int b = 0; b < grid.n_theta_hat(); ++b) {
      const double base = amp * (c * std::polar(rm, m * grid.theta_hat(b))).real();
      for (std::size_t y = 0; y < grid.y_count(); ++y)
        u.at(0, i, b, y) = modulated ? base * std::cos(y_phase(grid, z, y)) : base;
    }
  }
  for (std::size_t y = 0; y < grid.y_count(); ++y) {
    const double base = m == 0 ? amp * c.real() : 0.0;
    u.axis(0, y) = modulated ? base * std::cos(y_phase(grid, z, y)) : base;
  }
  return fold(u);
}

Manufactured gen_manufactured(const Grid& grid, const std::vector<ManufacturedMode>& modes) {
  const int q = grid.q(), n = grid.n();
  UnfoldedField u(grid, 1), g(grid, 1), flux(grid, n);
  bool has_flux = false;
  for (const ManufacturedMode& mode : modes) {
    const auto z = y_mode_or_zero(grid, mode.z);
    if (!mode_admissible(mode.m, z, q, grid.k()))
      throw InvalidProblem(fmt::format("manufactured mode m={} is not admissible", mode.m));
    if (!mode.flux_y.empty() && mode.flux_y.size() != static_cast<std::size_t>(grid.y_dims()))
      throw DimensionError("flux_y needs one entry per y-dimension");
    has_flux = has_flux || mode.flux_r != 0.0 || mode.flux_theta != 0.0;
    for (cplx v : mode.flux_y) has_flux = has_flux || v != 0.0;
    const int M = std::abs(mode.m);
    const double beta = mode.beta;
    std::vector<double> kap(grid.y_dims());
    double k2 = 0.0;
    for (int d = 0; d < grid.y_dims(); ++d) {
      kap[d] = kTwoPi * z[d] / grid.rho(d);
      k2 += kap[d] * kap[d];
    }
    for (int i = 0; i < grid.rings(); ++i) {
      const double r = grid.rhat(i);
      const double e = std::exp(-beta * r * r);
      const double p = std::pow(r, M) * e;
      const double jac = conformal_jacobian(q, r);
      // Delta_xi (p e^{i m theta}) / e^{i m theta}
      const double lap = (-4.0 * beta * (M + 1) * std::pow(r, M) + 4.0 * beta * beta * std::pow(r, M + 2)) * e;
      // div_xi of the unfolded flux, per unit E
      const cplx div_f = mode.flux_r * ((M + 2) * std::pow(r, M) - 2.0 * beta * std::pow(r, M + 2)) * e +
                         cplx(0.0, mode.m) * mode.flux_theta * std::pow(r, M) * e;
      cplx div_y = 0.0;
      for (std::size_t d = 0; d < mode.flux_y.size(); ++d) div_y += cplx(0.0, kap[d]) * mode.flux_y[d] * p;
      const cplx numer = mode.amplitude * (lap - jac * k2 * p) - div_f;
      const cplx g_mode = numer / jac - div_y;
      const double conf = q * std::pow(r, q - 1);
      for (int b = 0; b < grid.n_theta_hat(); ++b) {
        const double th = grid.theta_hat(b);
        for (std::size_t y = 0; y < grid.y_count(); ++y) {
          const cplx E = std::polar(1.0, mode.m * th + y_phase(grid, z, y));
          u.at(0, i, b, y) += (mode.amplitude * p * E).real();
          g.at(0, i, b, y) += (g_mode * E).real();
          const double Fr = (mode.flux_r * r * p * E).real();
          const double Ft = (mode.flux_theta * r * p * E).real();
          // back to the x-frame: f = (F_r + i F_theta) e^{i q theta_hat} / (q r^{q-1})
          const cplx fx = cplx(Fr, Ft) * std::polar(1.0 / conf, q * th);
          flux.at(0, i, b, y) += fx.real();
          flux.at(1, i, b, y) += fx.imag();
          for (std::size_t d = 0; d < mode.flux_y.size(); ++d)
            flux.at(2 + static_cast<int>(d), i, b, y) += (mode.flux_y[d] * p * E).real();
        }
      }
    }
  }
  Manufactured out{fold(u), fold(g), std::nullopt};
  out.g.clear_axis();
  if (has_flux) {
    out.flux = fold(flux);
    out.flux->clear_axis();
  }
  return out;
}

}  // namespace branchsolve
