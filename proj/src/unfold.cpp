#include "branchsolve/unfold.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>

#include "branchsolve/error.hpp"
#include "branchsolve/fourier.hpp"
#include "branchsolve/parallel.hpp"

namespace branchsolve {

namespace {

double angular_mean(const UnfoldedField& g, int comp, int ring, std::size_t y) {
  double s = 0.0;
  for (int b = 0; b < g.grid().n_theta_hat(); ++b) s += g.at(comp, ring, b, y);
  return s / g.grid().n_theta_hat();
}

std::vector<int> spectral_dims(const Grid& grid) {
  std::vector<int> dims{grid.n_theta_hat()};
  for (int d = 0; d < grid.y_dims(); ++d) dims.push_back(grid.n_y(d));
  return dims;
}

}  // namespace

UnfoldedField unfold(const SheetedField& f) {
  const Grid& g = f.grid();
  if (g.n_theta_hat() % g.q() != 0)
    throw ResolutionError("angular node count is not divisible by q");
  UnfoldedField out(g, f.components());
  for (int c = 0; c < f.components(); ++c)
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
          const int b = unfolded_angle_index(g, l, j);
          for (std::size_t y = 0; y < g.y_count(); ++y) out.at(c, i, b, y) = f.at(c, l, i, j, y);
        }
  if (f.axis()) {
    std::copy(f.axis()->begin(), f.axis()->end(), out.axis_values().begin());
  } else {
    for (int c = 0; c < f.components(); ++c)
      for (std::size_t y = 0; y < g.y_count(); ++y) {
        const double a1 = angular_mean(out, c, 0, y);
        const double a2 = g.rings() > 1 ? angular_mean(out, c, 1, y) : a1;
        out.axis(c, y) = (4.0 * a1 - a2) / 3.0;
      }
  }
  return out;
}

SheetedField fold(const UnfoldedField& gf) {
  const Grid& g = gf.grid();
  SheetedField out(g, gf.components());
  for (int c = 0; c < gf.components(); ++c)
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
          const int b = unfolded_angle_index(g, l, j);
          for (std::size_t y = 0; y < g.y_count(); ++y) out.at(c, l, i, j, y) = gf.at(c, i, b, y);
        }
  out.set_axis(std::vector<double>(gf.axis_values().begin(), gf.axis_values().end()));
  return out;
}

UnfoldedField gradient_xi_polar(const UnfoldedField& gf, int threads) {
  const Grid& g = gf.grid();
  const int n = g.n();
  const int comps = gf.components();
  UnfoldedField out(g, comps * n);
  const int rings = g.rings();
  const double h = g.h();
  const std::size_t ny = g.y_count();
  const int nth = g.n_theta_hat();

  // radial derivative
  parallel_for(static_cast<std::size_t>(comps) * rings, threads, [&](std::size_t task) {
    const int c = static_cast<int>(task / rings);
    const int i = static_cast<int>(task % rings);
    for (int b = 0; b < nth; ++b)
      for (std::size_t y = 0; y < ny; ++y) {
        double d;
        if (i == rings - 1) {
          const double u2 = rings >= 3 ? gf.at(c, i - 2, b, y) : gf.axis(c, y);
          d = (3.0 * gf.at(c, i, b, y) - 4.0 * gf.at(c, i - 1, b, y) + u2) / (2.0 * h);
        } else {
          const double lo = i == 0 ? gf.axis(c, y) : gf.at(c, i - 1, b, y);
          d = (gf.at(c, i + 1, b, y) - lo) / (2.0 * h);
        }
        out.at(c * n, i, b, y) = d;
      }
  });

  // angular and y derivatives, spectral per ring
  const auto plan = dft_plan(spectral_dims(g));
  const std::size_t plane = plan->size();
  parallel_for(static_cast<std::size_t>(comps) * rings, threads, [&](std::size_t task) {
    const int c = static_cast<int>(task / rings);
    const int i = static_cast<int>(task % rings);
    std::vector<cplx> spec(plane), work(plane);
    for (int b = 0; b < nth; ++b)
      for (std::size_t y = 0; y < ny; ++y) spec[b * ny + y] = gf.at(c, i, b, y);
    plan->forward(spec);
    for (int d = 1; d < n; ++d) {
      for (int b = 0; b < nth; ++b) {
        const int m = signed_frequency(b, nth);
        for (std::size_t y = 0; y < ny; ++y) {
          double factor;
          if (d == 1) {
            factor = is_nyquist(m, nth) ? 0.0 : m;
          } else {
            const int dim = d - 2;
            const auto idx = g.y_multi_index(y);
            const int z = signed_frequency(idx[dim], g.n_y(dim));
            factor = is_nyquist(z, g.n_y(dim)) ? 0.0 : 2.0 * std::numbers::pi * z / g.rho(dim);
          }
          work[b * ny + y] = spec[b * ny + y] * cplx(0.0, factor / static_cast<double>(plane));
        }
      }
      plan->backward(work);
      const double scale = d == 1 ? 1.0 / g.rhat(i) : 1.0;
      for (int b = 0; b < nth; ++b)
        for (std::size_t y = 0; y < ny; ++y) out.at(c * n + d, i, b, y) = work[b * ny + y].real() * scale;
    }
  });
  return out;
}

SheetedField gradient_x(const UnfoldedField& gf, int threads) {
  const Grid& g = gf.grid();
  const int n = g.n();
  UnfoldedField polar = gradient_xi_polar(gf, threads);
  const int q = g.q();
  for (int c = 0; c < gf.components(); ++c)
    for (int i = 0; i < g.rings(); ++i) {
      const double rh = g.rhat(i);
      const double scale = 1.0 / (q * std::pow(rh, q - 1));
      for (int b = 0; b < g.n_theta_hat(); ++b) {
        const cplx rot = std::polar(scale, q * g.theta_hat(b));
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          const cplx dx = rot * cplx(polar.at(c * n, i, b, y), polar.at(c * n + 1, i, b, y));
          polar.at(c * n, i, b, y) = dx.real();
          polar.at(c * n + 1, i, b, y) = dx.imag();
        }
      }
    }
  SheetedField out = fold(polar);
  out.clear_axis();
  return out;
}

bool mode_admissible(int m, std::span<const int>, int q, int k) { return mode_admissible(m, q, k); }

bool mode_admissible(int m, int q, int k) {
  if (gcd(q, k) != 1) throw InvalidProblem(fmt::format("gcd(k={}, q={}) != 1", k, q));
  return m % k == 0 && m % q != 0;
}

}  // namespace branchsolve
