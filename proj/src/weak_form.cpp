#include "branchsolve/weak_form.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "branchsolve/error.hpp"
#include "branchsolve/parallel.hpp"
#include "branchsolve/radial.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return s * s * s;
}

double bump_derivative(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return -6.0 * t * s * s;
}

double periodic_offset(double x, double center, double period) {
  double d = std::fmod(x - center, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

}  // namespace

ModeSpectrum assemble_rhs(const Grid& grid, int components, const SheetedField* flux,
                          const SheetedField* source, int threads) {
  const int n = grid.n();
  const int q = grid.q();
  const int rings = grid.rings();
  const int A = grid.n_rhat() - 1;
  const double h = grid.h();
  ModeSpectrum rhs(grid, components);
  const std::size_t modes = rhs.mode_count();

  if (source) {
    if (source->components() != components) throw DimensionError("source has the wrong component count");
    UnfoldedField g = unfold(*source);
    for (int c = 0; c < components; ++c) {
      for (int i = 0; i < rings; ++i) {
        const double jac = conformal_jacobian(q, grid.rhat(i));
        for (int b = 0; b < grid.n_theta_hat(); ++b)
          for (std::size_t y = 0; y < grid.y_count(); ++y) g.at(c, i, b, y) *= jac;
      }
      for (std::size_t y = 0; y < grid.y_count(); ++y) g.axis(c, y) *= conformal_jacobian(q, 0.0);
    }
    rhs = analyze(g, threads);
  }

  if (!flux) return rhs;
  if (flux->components() != components * n) throw DimensionError("flux has the wrong component count");

  // F_r, F_theta in the unfolded frame and J f_y, one block of n per component.
  UnfoldedField f = unfold(*flux);
  for (int c = 0; c < components; ++c)
    for (int i = 0; i < rings; ++i) {
      const double rh = grid.rhat(i);
      const double conf = q * std::pow(rh, q - 1);
      const double jac = conformal_jacobian(q, rh);
      for (int b = 0; b < grid.n_theta_hat(); ++b) {
        const cplx rot = std::polar(conf, -q * grid.theta_hat(b));
        for (std::size_t y = 0; y < grid.y_count(); ++y) {
          const cplx polar = rot * cplx(f.at(c * n, i, b, y), f.at(c * n + 1, i, b, y));
          f.at(c * n, i, b, y) = polar.real();
          f.at(c * n + 1, i, b, y) = polar.imag();
          for (int d = 2; d < n; ++d) f.at(c * n + d, i, b, y) *= jac;
        }
      }
    }
  for (std::size_t idx = 0; idx < f.axis_values().size(); ++idx) {
    const int comp = static_cast<int>(idx / grid.y_count());
    const bool in_plane = comp % n < 2;
    if (in_plane || q > 1) f.axis_values()[idx] = 0.0;
  }
  const ModeSpectrum fs = analyze(f, threads);

  parallel_for(modes, threads, [&](std::size_t s) {
    const int m = rhs.angular_mode(s);
    const auto z = rhs.y_mode(s);
    std::vector<double> kap(grid.y_dims());
    for (int d = 0; d < grid.y_dims(); ++d) kap[d] = kTwoPi * z[d] / grid.rho(d);
    for (int c = 0; c < components; ++c) {
      auto fr = [&](int a) { return fs.at(c * n, a, s); };
      // flux at the half node between a-1 and a
      auto half = [&](int a) {
        if (a == 1 && q == 1) return 0.5 * (3.0 * fr(1) - fr(2));
        return 0.5 * (fr(a - 1) + fr(a));
      };
      for (int a = 0; a < A; ++a) {
        cplx value = 0.0;
        if (a == 0) {
          if (m != 0) continue;
          value = 4.0 * half(1) / h;
        } else {
          const double r = a * h;
          value = ((r + 0.5 * h) * half(a + 1) - (r - 0.5 * h) * half(a)) / (r * h);
          value += cplx(0.0, m / r) * fs.at(c * n + 1, a, s);
        }
        for (int d = 0; d < grid.y_dims(); ++d) value += cplx(0.0, kap[d]) * fs.at(c * n + 2 + d, a, s);
        rhs.at(c, a, s) += value;
      }
    }
  });
  return rhs;
}

ModeSpectrum apply_operator(const ModeSpectrum& u, int threads) {
  ModeSpectrum out(u.grid(), u.components());
  const int nodes = u.radial_nodes();
  parallel_for(u.mode_count(), threads, [&](std::size_t s) {
    const int m = u.angular_mode(s);
    const double k2 = u.kappa2(s);
    std::vector<cplx> profile(nodes);
    for (int c = 0; c < u.components(); ++c) {
      for (int a = 0; a < nodes; ++a) profile[a] = u.at(c, a, s);
      const auto lu = radial_apply(m, k2, u.grid().q(), profile);
      for (int a = 0; a < nodes; ++a) out.at(c, a, s) = lu[a];
    }
  });
  return out;
}

std::vector<TestBump> test_bumps(const Grid& grid, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TestBump> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    TestBump t;
    t.r0 = 0.3 + 0.45 * unit(rng);
    t.dr = 0.1 + 0.1 * unit(rng);
    t.dr = std::min({t.dr, t.r0 - 0.1, 0.95 - t.r0});
    t.t0 = kTwoPi * unit(rng);
    t.dt = 0.4 + 0.8 * unit(rng);
    for (int d = 0; d < grid.y_dims(); ++d) {
      t.y0.push_back(grid.rho(d) * unit(rng));
      t.dy.push_back(grid.rho(d) * (0.25 + 0.2 * unit(rng)));
    }
    out.push_back(std::move(t));
  }
  return out;
}

UnfoldedField discrete_residual(const SheetedField& u, const SheetedField* flux, const SheetedField* source,
                                int threads) {
  const Grid& grid = u.grid();
  const ModeSpectrum lu = apply_operator(analyze(unfold(u), threads), threads);
  const ModeSpectrum rhs = assemble_rhs(grid, u.components(), flux, source, threads);
  ModeSpectrum res(grid, u.components());
  const int A = grid.n_rhat() - 1;
  for (int c = 0; c < u.components(); ++c)
    for (int a = 0; a < A; ++a)
      for (std::size_t s = 0; s < res.mode_count(); ++s) {
        if (a == 0 && res.angular_mode(s) != 0) continue;
        res.at(c, a, s) = lu.at(c, a, s) - rhs.at(c, a, s);
      }
  return synthesize(res, threads);
}

double weak_residual_norm(const UnfoldedField& residual, const std::vector<TestBump>& bumps) {
  const Grid& grid = residual.grid();
  const int q = grid.q();
  const double h = grid.h();
  const double dth = kTwoPi / grid.n_theta_hat();
  double dyvol = 1.0;
  for (int d = 0; d < grid.y_dims(); ++d) dyvol *= grid.rho(d) / grid.n_y(d);
  const double cell = h * dth * dyvol;

  double worst = 0.0;
  for (const TestBump& t : bumps) {
    // factor tables
    std::vector<double> yf(grid.y_count(), 1.0), yd(grid.y_count() * grid.y_dims(), 0.0);
    for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
      const auto idx = grid.y_multi_index(yi);
      std::vector<double> vals(grid.y_dims()), ders(grid.y_dims());
      for (int d = 0; d < grid.y_dims(); ++d) {
        if (grid.n_y(d) == 1) {
          vals[d] = 1.0;
          ders[d] = 0.0;
          continue;
        }
        const double s = periodic_offset(grid.y(d, idx[d]), t.y0[d], grid.rho(d)) / t.dy[d];
        vals[d] = bump(s);
        ders[d] = bump_derivative(s) / t.dy[d];
      }
      for (int d = 0; d < grid.y_dims(); ++d) {
        yf[yi] *= vals[d];
        double p = ders[d];
        for (int e = 0; e < grid.y_dims(); ++e)
          if (e != d) p *= vals[e];
        yd[yi * grid.y_dims() + d] = p;
      }
    }
    std::vector<double> tf(grid.n_theta_hat()), td(grid.n_theta_hat());
    for (int b = 0; b < grid.n_theta_hat(); ++b) {
      const double s = periodic_offset(grid.theta_hat(b), t.t0, kTwoPi) / t.dt;
      tf[b] = bump(s);
      td[b] = bump_derivative(s) / t.dt;
    }

    double norm = 0.0;
    std::vector<double> pairing(residual.components(), 0.0);
    for (int i = 0; i < grid.rings(); ++i) {
      const double rh = grid.rhat(i);
      const double s = (rh - t.r0) / t.dr;
      const double rf = bump(s);
      const double rd = bump_derivative(s) / t.dr;
      if (rf == 0.0 && rd == 0.0) continue;
      const double jac = conformal_jacobian(q, rh);
      for (int b = 0; b < grid.n_theta_hat(); ++b) {
        if (tf[b] == 0.0 && td[b] == 0.0) continue;
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
          const double zeta = rf * tf[b] * yf[yi];
          const double gr = rd * tf[b] * yf[yi];
          const double gt = rf * td[b] * yf[yi] / rh;
          double gy2 = 0.0;
          for (int d = 0; d < grid.y_dims(); ++d) {
            const double v = rf * tf[b] * yd[yi * grid.y_dims() + d];
            gy2 += v * v;
          }
          const double w = rh * cell;
          norm += w * (std::abs(zeta) * jac + std::sqrt((gr * gr + gt * gt) * jac + gy2 * jac * jac));
          for (int c = 0; c < residual.components(); ++c) pairing[c] += w * residual.at(c, i, b, yi) * zeta;
        }
      }
    }
    if (norm <= 0.0) continue;
    for (double p : pairing) worst = std::max(worst, std::abs(p) / norm);
  }
  return worst;
}

}  // namespace branchsolve
