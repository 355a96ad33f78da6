#include "branchsolve/fd_reference.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <fmt/core.h>
#include <numbers>

#include "branchsolve/error.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

SheetedField direct_fd_reference(const PoissonProblem& p, std::size_t max_unknowns) {
  const Grid& g = p.grid();
  const int q = g.q(), n = g.n();
  const int rings = g.rings();
  const int inner = rings - 1;  // rings carrying unknowns
  const int nt = g.n_theta();
  const std::size_t ny = g.y_count();
  const std::size_t unknowns = ny + static_cast<std::size_t>(q) * inner * nt * ny;
  if (unknowns > max_unknowns)
    throw ResolutionError(fmt::format("reference solve needs {} unknowns, limit {}", unknowns, max_unknowns));
  if (inner < 1) throw ResolutionError("reference solve needs at least two rings");

  const double dth = 2.0 * std::numbers::pi / nt;
  double dyvol = 1.0;
  std::vector<double> dy(g.y_dims());
  for (int d = 0; d < g.y_dims(); ++d) {
    dy[d] = g.rho(d) / g.n_y(d);
    dyvol *= dy[d];
  }
  auto node = [&](int l, int i, int j, std::size_t y) {
    return static_cast<Eigen::Index>(ny + ((static_cast<std::size_t>(l) * inner + i) * nt + j) * ny + y);
  };
  auto face = [&](int i) { return i < 0 ? 0.5 * g.r(0) : 0.5 * (g.r(i) + g.r(i + 1)); };
  auto y_neighbor = [&](std::size_t y, int d, int step) {
    auto idx = g.y_multi_index(y);
    idx[d] += step;
    return g.y_flat_index(idx);
  };

  std::optional<UnfoldedField> gsrc;
  if (p.source) gsrc = unfold(*p.source);
  const SheetedField* f = p.flux ? &*p.flux : nullptr;

  const int comps = p.components();
  SheetedField out(g, comps);
  std::vector<double> axis(static_cast<std::size_t>(comps) * ny);

  for (int c = 0; c < comps; ++c) {
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
    auto couple = [&](Eigen::Index a, Eigen::Index b, double t) {
      trip.emplace_back(a, a, t);
      trip.emplace_back(b, b, t);
      trip.emplace_back(a, b, -t);
      trip.emplace_back(b, a, -t);
    };
    // f . (cos t, sin t) and f . (-sin t, cos t) at a sheeted node
    auto f_radial = [&](int l, int i, int j, std::size_t y, double t) {
      return f->at(c * n, l, i, j, y) * std::cos(t) + f->at(c * n + 1, l, i, j, y) * std::sin(t);
    };
    auto f_angular = [&](int l, int i, int j, std::size_t y, double t) {
      return -f->at(c * n, l, i, j, y) * std::sin(t) + f->at(c * n + 1, l, i, j, y) * std::cos(t);
    };

    // axis cells
    const double r_axis = face(-1);
    const double axis_area = q * std::numbers::pi * r_axis * r_axis;
    for (std::size_t y = 0; y < ny; ++y) {
      const auto a = static_cast<Eigen::Index>(y);
      for (int d = 0; d < g.y_dims(); ++d) {
        if (g.n_y(d) == 1) continue;
        const std::size_t yn = y_neighbor(y, d, 1);
        couple(a, static_cast<Eigen::Index>(yn), axis_area * dyvol / (dy[d] * dy[d]));
        if (f) {
          double fy = 0.0;
          for (int l = 0; l < q; ++l)
            for (int j = 0; j < nt; ++j) fy += f->at(c * n + 2 + d, l, 0, j, y) + f->at(c * n + 2 + d, l, 0, j, yn);
          fy /= 2.0 * q * nt;
          const double flux = axis_area * dyvol / dy[d] * fy;
          rhs[a] += flux;
          rhs[static_cast<Eigen::Index>(yn)] -= flux;
        }
      }
      if (gsrc) rhs[a] += gsrc->axis(c, y) * axis_area * dyvol;
      for (int l = 0; l < q; ++l)
        for (int j = 0; j < nt; ++j) {
          const Eigen::Index b = node(l, 0, j, y);
          couple(a, b, r_axis * dth / g.r(0) * dyvol);
          if (f) {
            const double flux = r_axis * dth * dyvol * f_radial(l, 0, j, y, g.theta(j));
            rhs[a] += flux;
            rhs[b] -= flux;
          }
        }
    }

    for (int l = 0; l < q; ++l)
      for (int i = 0; i < inner; ++i) {
        const double rm = face(i - 1), rp = face(i);
        const double area = 0.5 * (rp * rp - rm * rm) * dth;
        for (int j = 0; j < nt; ++j)
          for (std::size_t y = 0; y < ny; ++y) {
            const Eigen::Index a = node(l, i, j, y);
            // radial face to ring i+1
            const double tr = rp * dth / (g.r(i + 1) - g.r(i)) * dyvol;
            double radial_flux = 0.0;
            if (f)
              radial_flux = rp * dth * dyvol * 0.5 *
                            (f_radial(l, i, j, y, g.theta(j)) + f_radial(l, i + 1, j, y, g.theta(j)));
            if (i + 1 < inner) {
              const Eigen::Index b = node(l, i + 1, j, y);
              couple(a, b, tr);
              rhs[b] -= radial_flux;
            } else {
              trip.emplace_back(a, a, tr);
              rhs[a] -= tr * p.boundary.at(c, l, rings - 1, j, y);
            }
            rhs[a] += radial_flux;
            // angular face to j+1, across the cut onto the next sheet
            const int jn = (j + 1) % nt;
            const int ln = j + 1 == nt ? (l + 1) % q : l;
            const Eigen::Index b = node(ln, i, jn, y);
            couple(a, b, std::log(rp / rm) / dth * dyvol);
            if (f) {
              const double t = (j + 1) * dth;
              const double flux = (rp - rm) * dyvol * 0.5 * (f_angular(l, i, j, y, t) + f_angular(ln, i, jn, y, t));
              rhs[a] += flux;
              rhs[b] -= flux;
            }
            for (int d = 0; d < g.y_dims(); ++d) {
              if (g.n_y(d) == 1) continue;
              const std::size_t yn = y_neighbor(y, d, 1);
              const Eigen::Index by = node(l, i, j, yn);
              couple(a, by, area * dyvol / (dy[d] * dy[d]));
              if (f) {
                const double flux = area * dyvol / dy[d] * 0.5 *
                                    (f->at(c * n + 2 + d, l, i, j, y) + f->at(c * n + 2 + d, l, i, j, yn));
                rhs[a] += flux;
                rhs[by] -= flux;
              }
            }
            if (gsrc) rhs[a] += gsrc->at(c, i, l * nt + j, y) * area * dyvol;
          }
      }

    // The assembled matrix is -Laplacian; move everything to that sign.
    Eigen::SparseMatrix<double> mat(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
    mat.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(mat);
    if (solver.info() != Eigen::Success) throw NumericError("reference factorisation failed");
    const Eigen::VectorXd u = solver.solve(-rhs);
    if (solver.info() != Eigen::Success) throw NumericError("reference solve failed");

    for (std::size_t y = 0; y < ny; ++y) axis[c * ny + y] = u[static_cast<Eigen::Index>(y)];
    for (int l = 0; l < q; ++l)
      for (int j = 0; j < nt; ++j)
        for (std::size_t y = 0; y < ny; ++y) {
          for (int i = 0; i < inner; ++i) out.at(c, l, i, j, y) = u[node(l, i, j, y)];
          out.at(c, l, rings - 1, j, y) = p.boundary.at(c, l, rings - 1, j, y);
        }
  }
  out.set_axis(std::move(axis));
  return out;
}

}  // namespace branchsolve
