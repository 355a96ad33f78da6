#include "branchsolve/mv_core.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <numbers>
#include <limits>
#include <numeric>

#include "branchsolve/assignment.hpp"
#include "branchsolve/error.hpp"
#include "branchsolve/fourier.hpp"

namespace branchsolve {

QTuple::QTuple(int q, int m, std::vector<double> values) : q_(q), m_(m), values_(std::move(values)) {
  if (q_ < 1 || m_ < 1) throw DimensionError("QTuple needs q >= 1 and m >= 1");
  if (values_.size() != static_cast<std::size_t>(q_) * m_)
    throw DimensionError(fmt::format("QTuple expects {} values, got {}", q_ * m_, values_.size()));
}

double metric_G(const QTuple& a, const QTuple& b) {
  if (a.q() != b.q() || a.m() != b.m())
    throw DimensionError(fmt::format("cannot compare A_{}(R^{}) with A_{}(R^{})", a.q(), a.m(),
                                     b.q(), b.m()));
  const int q = a.q();
  std::vector<double> cost(static_cast<std::size_t>(q) * q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      double d2 = 0.0;
      const auto pa = a.point(i);
      const auto pb = b.point(j);
      for (int c = 0; c < a.m(); ++c) d2 += (pa[c] - pb[c]) * (pa[c] - pb[c]);
      cost[i * q + j] = d2;
    }
  }
  double best = 0.0;
  if (q <= 6) {
    std::vector<int> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    best = std::numeric_limits<double>::infinity();
    do {
      double s = 0.0;
      for (int i = 0; i < q; ++i) s += cost[i * q + perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const auto match = min_cost_assignment(cost, q);
    for (int i = 0; i < q; ++i) best += cost[i * q + match[i]];
  }
  return std::sqrt(best);
}

QTuple tuple_at(const SheetedField& f, int ring, int j, std::size_t y) {
  const int q = f.grid().q();
  std::vector<double> v(static_cast<std::size_t>(q) * f.components());
  for (int l = 0; l < q; ++l)
    for (int c = 0; c < f.components(); ++c) v[l * f.components() + c] = f.at(c, l, ring, j, y);
  return QTuple(q, f.components(), std::move(v));
}

AverageFreeSplit average_free_decompose(const SheetedField& f) {
  const Grid& g = f.grid();
  SheetedField avg(g, f.components());
  SheetedField free(g, f.components());
  const int q = g.q();
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          const double base = f.at(c, 0, i, j, y);
          double s = 0.0;
          for (int l = 1; l < q; ++l) s += f.at(c, l, i, j, y) - base;
          const double mean = base + s / q;
          for (int l = 0; l < q; ++l) {
            avg.at(c, l, i, j, y) = mean;
            free.at(c, l, i, j, y) = f.at(c, l, i, j, y) - mean;
          }
        }
  if (f.axis()) {
    avg.set_axis(*f.axis());
    free.set_axis(std::vector<double>(f.axis()->size(), 0.0));
  }
  return {std::move(avg), std::move(free)};
}

SheetNode rotate_node(const Grid& grid, int sheet, int j) {
  const int nt = grid.n_theta();
  if (nt % grid.k() != 0)
    throw ResolutionError(fmt::format("N_theta={} per sheet is not divisible by k={}", nt, grid.k()));
  const int shifted = j + nt / grid.k();
  const int wrap = shifted >= nt ? 1 : 0;
  return {(sheet + grid.symmetry_sheet_shift() + wrap) % grid.q(), shifted - wrap * nt};
}

double kfold_symmetry_defect(const SheetedField& f) {
  const Grid& g = f.grid();
  double defect = 0.0;
  for (int l = 0; l < g.q(); ++l)
    for (int j = 0; j < g.n_theta(); ++j) {
      const SheetNode img = rotate_node(g, l, j);
      for (int c = 0; c < f.components(); ++c)
        for (int i = 0; i < g.rings(); ++i)
          for (std::size_t y = 0; y < g.y_count(); ++y)
            defect = std::max(defect, std::abs(f.at(c, img.sheet, i, img.j, y) - f.at(c, l, i, j, y)));
    }
  return defect;
}

double flux_equivariance_defect(const SheetedField& flux, int system_size) {
  const Grid& g = flux.grid();
  const int n = g.n();
  if (flux.components() != system_size * n)
    throw DimensionError(fmt::format("flux has {} components, expected {} x {}",
                                     flux.components(), system_size, n));
  const double angle = 2.0 * std::numbers::pi / g.k();
  const double c = std::cos(angle), s = std::sin(angle);
  double defect = 0.0;
  for (int l = 0; l < g.q(); ++l)
    for (int j = 0; j < g.n_theta(); ++j) {
      const SheetNode img = rotate_node(g, l, j);
      for (int kappa = 0; kappa < system_size; ++kappa)
        for (int i = 0; i < g.rings(); ++i)
          for (std::size_t y = 0; y < g.y_count(); ++y) {
            const int base = kappa * n;
            const double f1 = flux.at(base, l, i, j, y);
            const double f2 = flux.at(base + 1, l, i, j, y);
            defect = std::max(defect, std::abs(flux.at(base, img.sheet, i, img.j, y) - (c * f1 - s * f2)));
            defect = std::max(defect, std::abs(flux.at(base + 1, img.sheet, i, img.j, y) - (s * f1 + c * f2)));
            for (int p = 2; p < n; ++p)
              defect = std::max(defect, std::abs(flux.at(base + p, img.sheet, i, img.j, y) -
                                                 flux.at(base + p, l, i, j, y)));
          }
    }
  return defect;
}

SheetedField symmetrize(const SheetedField& f) {
  const Grid& g = f.grid();
  SheetedField out(g, f.components());
  for (int l = 0; l < g.q(); ++l)
    for (int j = 0; j < g.n_theta(); ++j) {
      SheetNode node{l, j};
      for (int a = 0; a < g.k(); ++a) {
        for (int c = 0; c < f.components(); ++c)
          for (int i = 0; i < g.rings(); ++i)
            for (std::size_t y = 0; y < g.y_count(); ++y)
              out.at(c, l, i, j, y) += f.at(c, node.sheet, i, node.j, y) / g.k();
        node = rotate_node(g, node.sheet, node.j);
      }
    }
  if (f.axis()) out.set_axis(*f.axis());
  return out;
}

SheetedField difference_quotient(const SheetedField& f, double h, std::span<const double> eta) {
  const Grid& g = f.grid();
  if (h == 0.0) throw InvalidProblem("difference quotient step h must be nonzero");
  if (eta.size() != static_cast<std::size_t>(g.y_dims()))
    throw DimensionError("direction eta must have n-2 entries");
  bool nonzero = false;
  for (double e : eta) nonzero = nonzero || e != 0.0;
  if (!nonzero) throw InvalidProblem("difference quotient direction must be nonzero");

  std::vector<double> shift(eta.size());
  std::vector<int> grid_shift(eta.size());
  bool aligned = true;
  for (int d = 0; d < g.y_dims(); ++d) {
    shift[d] = h * eta[d];
    const double cells = shift[d] * g.n_y(d) / g.rho(d);
    grid_shift[d] = static_cast<int>(std::lround(cells));
    aligned = aligned && std::abs(cells - grid_shift[d]) < 1e-9;
  }

  SheetedField out(g, f.components());
  const std::size_t ny = g.y_count();
  std::vector<cplx> line(ny);
  std::shared_ptr<const DftPlan> plan;
  std::vector<cplx> phase;
  if (!aligned) {
    plan = dft_plan(std::vector<int>(g.spec().n_y.begin(), g.spec().n_y.end()));
    phase.resize(ny);
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const auto idx = g.y_multi_index(yi);
      double arg = 0.0;
      bool nyquist = false;
      for (int d = 0; d < g.y_dims(); ++d) {
        const int z = signed_frequency(idx[d], g.n_y(d));
        arg += 2.0 * std::numbers::pi * z * shift[d] / g.rho(d);
        nyquist = nyquist || is_nyquist(z, g.n_y(d));
      }
      // a Nyquist mode has no conjugate partner; keep the real interpolant
      phase[yi] = nyquist ? cplx(std::cos(arg), 0.0) : std::polar(1.0, arg);
    }
  }
  for (int c = 0; c < f.components(); ++c)
    for (int l = 0; l < g.q(); ++l)
      for (int i = 0; i < g.rings(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
          if (aligned) {
            for (std::size_t yi = 0; yi < ny; ++yi) {
              auto idx = g.y_multi_index(yi);
              for (int d = 0; d < g.y_dims(); ++d) idx[d] += grid_shift[d];
              out.at(c, l, i, j, yi) = (f.at(c, l, i, j, g.y_flat_index(idx)) - f.at(c, l, i, j, yi)) / h;
            }
          } else {
            for (std::size_t yi = 0; yi < ny; ++yi) line[yi] = f.at(c, l, i, j, yi);
            plan->forward(line);
            for (std::size_t yi = 0; yi < ny; ++yi) line[yi] *= phase[yi] / static_cast<double>(ny);
            plan->backward(line);
            for (std::size_t yi = 0; yi < ny; ++yi)
              out.at(c, l, i, j, yi) = (line[yi].real() - f.at(c, l, i, j, yi)) / h;
          }
        }
  return out;
}

}  // namespace branchsolve
