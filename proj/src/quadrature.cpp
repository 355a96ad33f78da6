#include "branchsolve/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "branchsolve/error.hpp"
#include "branchsolve/radial.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double y_cell(const Grid& g) {
  double v = 1.0;
  for (int d = 0; d < g.y_dims(); ++d) v *= g.rho(d) / g.n_y(d);
  return v;
}

double y_distance2(const Grid& g, std::size_t y) {
  // distance to the torus centre y = 0 (min image)
  const auto idx = g.y_multi_index(y);
  double s = 0.0;
  for (int d = 0; d < g.y_dims(); ++d) {
    double v = g.y(d, idx[d]);
    v = std::min(v, g.rho(d) - v);
    s += v * v;
  }
  return s;
}

}  // namespace

double node_volume(const Grid& g, int ring) {
  const double rh = g.rhat(ring);
  const double w = ring == g.rings() - 1 ? 0.5 : 1.0;
  return w * rh * g.h() * (kTwoPi / g.n_theta_hat()) * conformal_jacobian(g.q(), rh) * y_cell(g);
}

double lp_norm(const SheetedField& f, double p, double radius) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i) {
        const double vol = node_volume(g, i);
        const double r2 = g.r(i) * g.r(i);
        for (int j = 0; j < g.n_theta(); ++j)
          for (std::size_t y = 0; y < g.y_count(); ++y) {
            if (radius > 0.0 && r2 + y_distance2(g, y) >= radius * radius) continue;
            s += vol * std::pow(std::abs(f.at(c, l, i, j, y)), p);
          }
      }
  return std::pow(s, 1.0 / p);
}

FieldInterpolator::FieldInterpolator(const SheetedField& f, double drop)
    : grid_(f.grid()), components_(f.components()) {
  const ModeSpectrum s = analyze(unfold(f));
  double biggest = 0.0;
  for (int c = 0; c < s.components(); ++c)
    for (int a = 0; a < s.radial_nodes(); ++a)
      for (std::size_t slot = 0; slot < s.mode_count(); ++slot) biggest = std::max(biggest, std::abs(s.at(c, a, slot)));
  for (int c = 0; c < s.components(); ++c)
    for (std::size_t slot = 0; slot < s.mode_count(); ++slot) {
      double peak = 0.0;
      for (int a = 0; a < s.radial_nodes(); ++a) peak = std::max(peak, std::abs(s.at(c, a, slot)));
      if (peak <= drop * biggest || peak == 0.0) continue;
      Mode mode;
      mode.comp = c;
      mode.m = s.angular_mode(slot);
      const auto z = s.y_mode(slot);
      for (int d = 0; d < grid_.y_dims(); ++d) mode.kappa.push_back(kTwoPi * z[d] / grid_.rho(d));
      for (int a = 0; a < s.radial_nodes(); ++a) mode.profile.push_back(s.at(c, a, slot));
      modes_.push_back(std::move(mode));
    }
}

FieldInterpolator::Value FieldInterpolator::eval(double r, double theta, const std::vector<double>& y) const {
  const int q = grid_.q();
  const double h = grid_.h();
  const int A = grid_.n_rhat() - 1;
  Value out;
  const double rh = std::pow(r, 1.0 / q);
  // cubic Lagrange stencil around rh
  int a0 = static_cast<int>(std::floor(rh / h)) - 1;
  a0 = std::clamp(a0, 0, A - 3);
  double w[4], dw[4];
  for (int i = 0; i < 4; ++i) {
    double num = 1.0, den = 1.0, dnum = 0.0;
    const double xi = (a0 + i) * h;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      const double xj = (a0 + j) * h;
      double prod = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != i && k != j) prod *= rh - (a0 + k) * h;
      dnum += prod;
      num *= rh - xj;
      den *= xi - xj;
    }
    w[i] = num / den;
    dw[i] = dnum / den;
  }
  const double jac = conformal_jacobian(q, rh);
  for (int l = 0; l < q; ++l) {
    const double th = (theta + kTwoPi * l) / q;
    std::vector<cplx> u(components_), ur(components_), ut(components_);
    std::vector<cplx> uy(static_cast<std::size_t>(components_) * grid_.y_dims());
    for (const Mode& mode : modes_) {
      cplx val = 0.0, der = 0.0;
      for (int i = 0; i < 4; ++i) {
        val += w[i] * mode.profile[a0 + i];
        der += dw[i] * mode.profile[a0 + i];
      }
      double arg = mode.m * th;
      for (int d = 0; d < grid_.y_dims(); ++d) arg += mode.kappa[d] * y[d];
      const cplx e = std::polar(1.0, arg);
      u[mode.comp] += val * e;
      ur[mode.comp] += der * e;
      ut[mode.comp] += cplx(0.0, mode.m) * val * e;
      for (int d = 0; d < grid_.y_dims(); ++d)
        uy[mode.comp * grid_.y_dims() + d] += cplx(0.0, mode.kappa[d]) * val * e;
    }
    for (int c = 0; c < components_; ++c) {
      out.u2 += u[c].real() * u[c].real();
      const double gr = ur[c].real();
      const double gt = rh > 0.0 ? ut[c].real() / rh : 0.0;
      double g2 = jac > 0.0 ? (gr * gr + gt * gt) / jac : 0.0;
      for (int d = 0; d < grid_.y_dims(); ++d) g2 += std::pow(uy[c * grid_.y_dims() + d].real(), 2);
      out.grad2 += g2;
    }
  }
  return out;
}

SheetedField random_average_free_field(const Grid& g, std::mt19937_64& rng, bool compact) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ModeSpectrum s(g, 1);
  const int q = g.q();
  const int band = std::min(g.n_theta_hat() / 2 - 1, 4 * q);
  std::vector<std::pair<int, std::vector<int>>> chosen;
  for (int m = 1; m <= band; ++m) {
    if (m % q == 0) continue;
    std::vector<int> z(g.y_dims(), 0);
    chosen.push_back({m, z});
    if (g.y_dims() > 0 && g.n_y(0) >= 4) {
      z[0] = 1;
      chosen.push_back({m, z});
    }
  }
  for (const auto& [m, z] : chosen) {
    const cplx amp(normal(rng), normal(rng));
    const double a = normal(rng), b = normal(rng);
    std::vector<int> zneg(z.size());
    for (std::size_t d = 0; d < z.size(); ++d) zneg[d] = -z[d];
    const std::size_t sp = s.slot(m, z), sn = s.slot(-m, zneg);
    for (int ia = 1; ia < s.radial_nodes(); ++ia) {
      const double rh = ia * g.h();
      const cplx v = amp * std::pow(rh, m) * (a + b * rh * rh) / (1.0 + m);
      s.at(0, ia, sp) += v;
      s.at(0, ia, sn) += std::conj(v);
    }
  }
  UnfoldedField u = synthesize(s);
  if (compact) {
    for (int i = 0; i < g.rings(); ++i) {
      const double rh = g.rhat(i);
      const double cut = std::pow(1.0 - rh * rh, 2);
      for (int b = 0; b < g.n_theta_hat(); ++b)
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          const double d = std::sqrt(y_distance2(g, y));
          const double t = d / 1.0;
          const double ybump = t < 1.0 ? std::pow(1.0 - t * t, 2) : 0.0;
          u.at(0, i, b, y) *= cut * ybump;
        }
    }
  }
  return fold(u);
}

namespace {

double grad_l2(const SheetedField& u, double radius) {
  const SheetedField du = gradient_x(unfold(u));
  return lp_norm(du, 2.0, radius);
}

}  // namespace

RatioStats poincare_ratios(const Grid& g, int samples, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  RatioStats out;
  for (int s = 0; s < samples; ++s) {
    SheetedField u = random_average_free_field(g, rng, false);
    // l = mean of the sheet average over the ball
    double sum = 0.0, vol = 0.0;
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
          for (std::size_t y = 0; y < g.y_count(); ++y) {
            if (g.r(i) * g.r(i) + y_distance2(g, y) >= radius * radius) continue;
            sum += node_volume(g, i) * u.at(0, l, i, j, y) / g.q();
            vol += node_volume(g, i) / g.q();
          }
    const double ell = vol > 0.0 ? sum / vol : 0.0;
    SheetedField shifted = u;
    for (double& v : shifted.values()) v -= ell;
    const double ratio = lp_norm(shifted, 2.0, radius) / (radius * grad_l2(u, radius));
    out.samples.push_back(ratio);
  }
  for (double r : out.samples) {
    out.max = std::max(out.max, r);
    out.mean += r / samples;
  }
  return out;
}

RatioStats sobolev_ratios(const Grid& g, int samples, std::uint64_t seed) {
  if (g.n() < 3) throw DimensionError("Sobolev ratio needs n >= 3");
  std::mt19937_64 rng(seed);
  RatioStats out;
  const double p = 2.0 * g.n() / (g.n() - 2.0);
  for (int s = 0; s < samples; ++s) {
    SheetedField u = random_average_free_field(g, rng, true);
    out.samples.push_back(lp_norm(u, p) / grad_l2(u, 0.0));
  }
  for (double r : out.samples) {
    out.max = std::max(out.max, r);
    out.mean += r / samples;
  }
  return out;
}

}  // namespace branchsolve
