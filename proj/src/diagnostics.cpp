#include "branchsolve/diagnostics.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>
#include <ostream>

#include "branchsolve/error.hpp"
#include "branchsolve/fourier.hpp"
#include "branchsolve/quadrature.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double node_norm(const SheetedField& f, int l, int i, int j, std::size_t y) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) s += f.at(c, l, i, j, y) * f.at(c, l, i, j, y);
  return std::sqrt(s);
}

}  // namespace

DecayFit decay_exponent(const SheetedField& input, bool use_gradient, double r_min, double r_max, int threads) {
  const SheetedField f = use_gradient ? gradient_x(unfold(input), threads) : input;
  const Grid& g = f.grid();
  DecayFit fit;
  for (int i = 0; i < g.rings(); ++i) {
    const double r = g.r(i);
    if (r < r_min || r > r_max) continue;
    double sup = 0.0;
    for (int l = 0; l < g.q(); ++l)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) sup = std::max(sup, node_norm(f, l, i, j, y));
    fit.radii.push_back(r);
    fit.sup_values.push_back(sup);
  }
  const std::size_t n = fit.radii.size();
  if (n < 4) throw ResolutionError(fmt::format("decay window [{}, {}] holds only {} rings", r_min, r_max, n));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fit.sup_values[i] <= 0.0) throw DegenerateField("field vanishes on a ring of the decay window");
    const double x = std::log(fit.radii[i]), y = std::log(fit.sup_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(fit.sup_values[i]) - intercept - fit.slope * std::log(fit.radii[i]);
    ssr += e * e;
  }
  fit.stderr_slope = std::sqrt(ssr / (n - 2) * n / denom);
  return fit;
}

FrequencyProfile frequency_function(const SheetedField& f, const std::vector<double>& y0,
                                    const std::vector<double>& radii, const FrequencyOptions& opts) {
  const Grid& g = f.grid();
  if (g.n() != 3) throw DimensionError("frequency_function supports n = 3");
  if (y0.size() != 1) throw DimensionError("y0 needs one coordinate");
  const FieldInterpolator interp(f);
  std::vector<double> sx, sw, cx, cw;
  gauss_legendre(opts.radial_nodes, sx, sw);
  gauss_legendre(opts.polar_nodes, cx, cw);
  const int na = opts.azimuth_nodes;

  FrequencyProfile prof;
  prof.y0 = y0;
  prof.radii = radii;
  for (double rho : radii) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidProblem(fmt::format("radius {} outside (0, 1)", rho));
    // sphere integral of |u|^2 and ball integral of |Du|^2
    double sphere = 0.0, ball = 0.0;
    for (int ip = 0; ip < opts.polar_nodes; ++ip) {
      const double ct = cx[ip], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int ia = 0; ia < na; ++ia) {
        const double th = 2.0 * kPi * (ia + 0.5) / na;
        const double wang = cw[ip] * 2.0 * kPi / na;
        {
          const auto v = interp.eval(rho * st, th, {y0[0] + rho * ct});
          sphere += wang * rho * rho * v.u2;
        }
        for (int is = 0; is < opts.radial_nodes; ++is) {
          const double s = 0.5 * rho * (sx[is] + 1.0);
          const double ws = 0.5 * rho * sw[is];
          const auto v = interp.eval(s * st, th, {y0[0] + s * ct});
          ball += wang * ws * s * s * v.grad2;
        }
      }
    }
    const double num = ball / rho;        // rho^{2-n} with n = 3
    const double den = sphere / (rho * rho);  // rho^{1-n}
    if (!(den > 0.0)) throw DegenerateField(fmt::format("u vanishes on the sphere of radius {}", rho));
    prof.numerators.push_back(num);
    prof.denominators.push_back(den);
    prof.values.push_back(num / den);
  }
  return prof;
}

BranchTrace branch_set(const SheetedField& f) {
  const Grid& g = f.grid();
  const UnfoldedField u = unfold(f);
  BranchTrace out;
  const std::size_t ny = g.y_count();
  out.values.resize(ny);
  for (std::size_t y = 0; y < ny; ++y) out.values[y] = u.axis(0, y);
  if (g.y_dims() == 0) return out;
  const auto plan = dft_plan(std::vector<int>(g.spec().n_y.begin(), g.spec().n_y.end()));
  std::vector<cplx> spec(out.values.begin(), out.values.end());
  plan->forward(spec);
  for (int order = 1; order <= 4; ++order) {
    std::vector<cplx> work(ny);
    for (std::size_t y = 0; y < ny; ++y) {
      const auto idx = g.y_multi_index(y);
      const int z = signed_frequency(idx[0], g.n_y(0));
      const cplx ik(0.0, is_nyquist(z, g.n_y(0)) ? 0.0 : 2.0 * kPi * z / g.rho(0));
      work[y] = spec[y] * std::pow(ik, order) / static_cast<double>(ny);
    }
    plan->backward(work);
    std::vector<double> d(ny);
    for (std::size_t y = 0; y < ny; ++y) d[y] = work[y].real();
    out.derivatives.push_back(std::move(d));
  }
  for (std::size_t y = 0; y < ny; ++y) {
    auto idx = g.y_multi_index(y);
    double acc = 0.0;
    const double coef[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    for (int s = 0; s < 5; ++s) {
      auto shifted = idx;
      shifted[0] += s - 2;
      acc += coef[s] * out.values[g.y_flat_index(shifted)];
    }
    out.max_fourth_difference = std::max(out.max_fourth_difference, std::abs(acc));
  }
  return out;
}

CauchyFit cauchy_bound_fit(const SheetedField& f, int p_max, double R) {
  const Grid& g = f.grid();
  if (p_max < 1 || p_max > 8) throw InvalidProblem("p_max must lie in 1..8");
  if (!(R > 0.0)) throw InvalidProblem("R must be positive");
  CauchyFit fit;
  const double s0 = f.max_abs();
  fit.table.push_back({0, s0, 0.0});
  if (g.y_dims() == 0 || s0 == 0.0) {
    for (int p = 1; p <= p_max; ++p) fit.table.push_back({p, 0.0, 0.0});
    return fit;
  }
  const std::size_t ny = g.y_count();
  const auto plan = dft_plan(std::vector<int>(g.spec().n_y.begin(), g.spec().n_y.end()));
  std::vector<double> sup(p_max + 1, 0.0);
  double total = 0.0, tail = 0.0;
  std::vector<cplx> spec(ny), work(ny);
  for (int c = 0; c < f.components(); ++c)
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
          for (std::size_t y = 0; y < ny; ++y) spec[y] = f.at(c, l, i, j, y);
          plan->forward(spec);
          for (std::size_t y = 0; y < ny; ++y) {
            const auto idx = g.y_multi_index(y);
            bool high = false;
            for (int d = 0; d < g.y_dims(); ++d) high = high || 3 * std::abs(signed_frequency(idx[d], g.n_y(d))) > g.n_y(d);
            total += std::norm(spec[y]);
            if (high) tail += std::norm(spec[y]);
          }
          for (int d = 0; d < g.y_dims(); ++d)
            for (int p = 1; p <= p_max; ++p) {
              for (std::size_t y = 0; y < ny; ++y) {
                const auto idx = g.y_multi_index(y);
                const int z = signed_frequency(idx[d], g.n_y(d));
                const cplx ik(0.0, is_nyquist(z, g.n_y(d)) ? 0.0 : 2.0 * kPi * z / g.rho(d));
                work[y] = spec[y] * std::pow(ik, p) / static_cast<double>(ny);
              }
              plan->backward(work);
              for (std::size_t y = 0; y < ny; ++y) sup[p] = std::max(sup[p], std::abs(work[y].real()));
            }
        }
  fit.tail_fraction = total > 0.0 ? tail / total : 0.0;
  fit.unreliable = fit.tail_fraction > 1e-8;
  for (int p = 1; p <= p_max; ++p) {
    const double cp = std::pow(sup[p] * std::pow(R, p) / (s0 * std::tgamma(p + 1.0)), 1.0 / p);
    fit.table.push_back({p, sup[p], cp});
    fit.C_estimate = std::max(fit.C_estimate, cp);
  }
  return fit;
}

double max_principle_check(const SheetedField& f) {
  const Grid& g = f.grid();
  double worst = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < f.components(); ++c) {
    double inner = -std::numeric_limits<double>::infinity();
    double outer = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
          for (std::size_t y = 0; y < g.y_count(); ++y) {
            double& target = i == g.rings() - 1 ? outer : inner;
            target = std::max(target, f.at(c, l, i, j, y));
          }
    if (f.axis())
      for (std::size_t y = 0; y < g.y_count(); ++y) inner = std::max(inner, (*f.axis())[c * g.y_count() + y]);
    worst = std::max(worst, inner - outer);
  }
  return worst;
}

void write_decay_csv(std::ostream& os, const DecayFit& fit) {
  os << "r,sup_abs\n";
  for (std::size_t i = 0; i < fit.radii.size(); ++i) os << fmt::format("{:.17g},{:.17g}\n", fit.radii[i], fit.sup_values[i]);
}

void write_frequency_csv(std::ostream& os, const FrequencyProfile& p) {
  os << "rho,N\n";
  for (std::size_t i = 0; i < p.radii.size(); ++i) os << fmt::format("{:.17g},{:.17g}\n", p.radii[i], p.values[i]);
}

void write_cauchy_csv(std::ostream& os, const CauchyFit& fit) {
  os << "p,S_p,C_p\n";
  for (const auto& row : fit.table) os << fmt::format("{},{:.17g},{:.17g}\n", row.p, row.S_p, row.C_p);
}

}  // namespace branchsolve
