#include "branchsolve/poisson.hpp"

#include <chrono>
#include <cmath>
#include <fmt/core.h>

#include "branchsolve/error.hpp"
#include "branchsolve/mv_core.hpp"
#include "branchsolve/parallel.hpp"
#include "branchsolve/radial.hpp"
#include "branchsolve/spectrum.hpp"
#include "branchsolve/unfold.hpp"
#include "branchsolve/weak_form.hpp"

namespace branchsolve {

namespace {

void check_symmetric(const SheetedField& f, double tol, const char* what) {
  const double scale = std::max(1.0, f.max_abs());
  const double defect = kfold_symmetry_defect(f);
  if (defect > tol * scale)
    throw InvariantViolation(fmt::format("{} is not k-fold symmetric (defect {:.3e})", what, defect));
}

bool in_band(const ModeSpectrum& s, std::size_t slot, const SolveOptions& opts) {
  if (opts.m_max >= 0 && std::abs(s.angular_mode(slot)) > opts.m_max) return false;
  if (opts.z_max >= 0)
    for (int z : s.y_mode(slot))
      if (std::abs(z) > opts.z_max) return false;
  return true;
}

double tail_fraction(const ModeSpectrum& s, int comp, int a) {
  const Grid& g = s.grid();
  double total = 0.0, tail = 0.0;
  for (std::size_t slot = 0; slot < s.mode_count(); ++slot) {
    const double e = std::norm(s.at(comp, a, slot));
    total += e;
    bool high = 3 * std::abs(s.angular_mode(slot)) > g.n_theta_hat();
    const auto z = s.y_mode(slot);
    for (int d = 0; d < g.y_dims(); ++d) high = high || 3 * std::abs(z[d]) > g.n_y(d);
    if (high) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

double forbidden_mode_energy(const SheetedField& u, int threads) {
  const ModeSpectrum s = analyze(unfold(u), threads);
  const int q = u.grid().q(), k = u.grid().k();
  const double total = s.energy([](std::size_t) { return true; });
  if (total == 0.0) return 0.0;
  const double bad = s.energy([&](std::size_t slot) { return mode_forbidden(s.angular_mode(slot), q, k); });
  return bad / total;
}

PoissonSolution solve_dirichlet(const PoissonProblem& p, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Grid& grid = p.grid();
  const int comps = p.components();
  const int q = grid.q(), k = grid.k();
  if (gcd(q, k) != 1) throw InvalidProblem("k and q must be relatively prime");
  if (p.source) {
    if (!(p.source->grid() == grid)) throw DimensionError("source grid differs from boundary grid");
    if (p.source->components() != comps) throw DimensionError("source component count differs");
  }
  if (p.flux) {
    if (!(p.flux->grid() == grid)) throw DimensionError("flux grid differs from boundary grid");
    if (p.flux->components() != comps * grid.n()) throw DimensionError("flux needs n components per unknown");
  }

  check_symmetric(p.boundary, opts.symmetry_tol, "boundary data");
  if (p.source) check_symmetric(*p.source, opts.symmetry_tol, "source g");
  if (p.flux) {
    const double defect = flux_equivariance_defect(*p.flux, comps);
    if (defect > opts.symmetry_tol * std::max(1.0, p.flux->max_abs()))
      throw InvariantViolation(fmt::format("flux violates rotation equivariance (defect {:.3e})", defect));
  }

  SolveReport report;
  const ModeSpectrum bc = analyze(unfold(p.boundary), opts.threads);
  const ModeSpectrum rhs = assemble_rhs(grid, comps, p.flux ? &*p.flux : nullptr,
                                        p.source ? &*p.source : nullptr, opts.threads);
  const int A = grid.n_rhat() - 1;
  for (int c = 0; c < comps; ++c) {
    const double tail = tail_fraction(bc, c, A);
    if (tail > 1e-10)
      report.warnings.push_back(fmt::format("boundary data component {} has {:.2e} of its energy in the top third of the resolved band", c, tail));
  }

  if (opts.m_max >= 0 || opts.z_max >= 0) {
    auto dropped = [&](std::size_t slot) { return !in_band(bc, slot, opts); };
    auto all = [](std::size_t) { return true; };
    const double total = bc.energy(all) + rhs.energy(all);
    const double lost = bc.energy(dropped) + rhs.energy(dropped);
    if (total > 0.0 && lost > 1e-12 * total)
      report.warnings.push_back(fmt::format("truncation m_max={}, z_max={} drops {:.2e} of the data energy",
                                            opts.m_max, opts.z_max, lost / total));
  }

  ModeSpectrum sol(grid, comps);
  std::vector<char> solved(sol.mode_count(), 0);
  parallel_for(sol.mode_count(), opts.threads, [&](std::size_t slot) {
    const int m = sol.angular_mode(slot);
    if (!(mode_average(m, q) || mode_admissible(m, q, k))) return;
    if (!in_band(sol, slot, opts)) return;
    const double k2 = sol.kappa2(slot);
    std::vector<cplx> profile(A + 1);
    for (int c = 0; c < comps; ++c) {
      for (int a = 0; a <= A; ++a) profile[a] = rhs.at(c, a, slot);
      const auto u = radial_solve(m, k2, q, profile, bc.at(c, A, slot));
      for (int a = 0; a <= A; ++a) sol.at(c, a, slot) = u[a];
    }
    solved[slot] = 1;
  });
  for (char s : solved) report.modes_solved += s;

  SheetedField u = fold(synthesize(sol, opts.threads));

  for (int c = 0; c < comps; ++c)
    for (int l = 0; l < q; ++l)
      for (int j = 0; j < grid.n_theta(); ++j)
        for (std::size_t y = 0; y < grid.y_count(); ++y)
          report.boundary_error = std::max(report.boundary_error,
                                           std::abs(u.at(c, l, A - 1, j, y) - p.boundary.at(c, l, A - 1, j, y)));
  report.forbidden_mode_energy = forbidden_mode_energy(u, opts.threads);
  if (opts.report_residual) {
    const UnfoldedField res = discrete_residual(u, p.flux ? &*p.flux : nullptr, p.source ? &*p.source : nullptr,
                                                opts.threads);
    report.weak_residual = weak_residual_norm(res, test_bumps(grid, opts.residual_seed));
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(u), std::move(report)};
}

void write_report(std::ostream& os, const SolveReport& r) {
  os << fmt::format("forbidden_mode_energy = {:.17g}\n", r.forbidden_mode_energy);
  os << fmt::format("boundary_error = {:.17g}\n", r.boundary_error);
  os << fmt::format("weak_residual = {:.17g}\n", r.weak_residual);
  os << fmt::format("modes_solved = {}\n", r.modes_solved);
  for (std::size_t i = 0; i < r.warnings.size(); ++i) os << fmt::format("warning_{} = {}\n", i + 1, r.warnings[i]);
  os << fmt::format("wall_time_ms = {:.3f}\n", r.wall_time_ms);
}

}  // namespace branchsolve
