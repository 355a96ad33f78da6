#include "branchsolve/app.hpp"

#include <cmath>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <numbers>
#include <ostream>

#include "branchsolve/diagnostics.hpp"
#include "branchsolve/error.hpp"
#include "branchsolve/fd_reference.hpp"
#include "branchsolve/field_io.hpp"
#include "branchsolve/generators.hpp"
#include "branchsolve/holder.hpp"
#include "branchsolve/mv_core.hpp"
#include "branchsolve/nonlinear.hpp"
#include "branchsolve/poisson.hpp"

namespace branchsolve {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

SheetedField stack_components(const std::vector<SheetedField>& parts) {
  const Grid& g = parts.front().grid();
  SheetedField out(g, static_cast<int>(parts.size()));
  const std::size_t block = parts.front().size();
  std::vector<double> axis;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    std::copy(parts[c].values().begin(), parts[c].values().end(), out.values().begin() + c * block);
    if (parts[c].axis()) axis.insert(axis.end(), parts[c].axis()->begin(), parts[c].axis()->end());
  }
  if (axis.size() == static_cast<std::size_t>(out.components()) * g.y_count()) out.set_axis(std::move(axis));
  return out;
}

double max_diff(const SheetedField& a, const SheetedField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

void write_solution(const RunConfig& cfg, const SheetedField& u) { save_field(fs::path(cfg.out) / "u.field", u); }

int solve_poisson(const RunConfig& cfg, std::ostream& log) {
  BoundarySetup data = build_problem_data(cfg);
  PoissonProblem p{data.phi, data.source, data.flux, cfg.mu};
  SolveOptions opts;
  opts.threads = cfg.threads;
  opts.residual_seed = cfg.seed;
  PoissonSolution sol = solve_dirichlet(p, opts);
  write_solution(cfg, sol.u);
  auto os = open_out(fs::path(cfg.out) / "report.txt");
  if (data.exact) os << fmt::format("reference_error = {:.17g}\n", max_diff(sol.u, *data.exact));
  write_report(os, sol.report);
  log << fmt::format("solve-poisson: {} modes, forbidden energy {:.3e}, weak residual {:.3e}\n",
                     sol.report.modes_solved, sol.report.forbidden_mode_energy, sol.report.weak_residual);
  return kExitOk;
}

int solve_nonlinear(const RunConfig& cfg, std::ostream& log) {
  const Nonlinearity nl = nonlinearity_by_id(cfg.nonlinearity);
  const BoundarySetup data = build_problem_data(cfg, nl.m);
  PicardOptions opts;
  opts.tol = cfg.tol;
  opts.residual_tol = cfg.residual_tol;
  opts.max_iters = cfg.max_iters;
  opts.relaxation = cfg.relaxation;
  opts.mu = cfg.mu;
  opts.threads = cfg.threads;
  opts.seed = cfg.seed;
  try {
    PicardResult res = picard_solve(nl, data.phi, opts);
    {
      auto os = open_out(fs::path(cfg.out) / "trace.csv");
      write_trace(os, res.trace);
    }
    auto os = open_out(fs::path(cfg.out) / "report.txt");
    os << fmt::format("iterations = {}\n", res.trace.records.size());
    os << fmt::format("converged = {}\n", res.trace.converged ? "true" : "false");
    const double residual = res.trace.records.back().residual;
    os << fmt::format("final_residual = {:.17g}\n", residual);
    if (!res.trace.converged) {
      log << fmt::format("solve-nonlinear: no convergence within {} iterations\n", cfg.max_iters);
      return kExitDiverged;
    }
    if (residual > cfg.residual_tol)
      log << fmt::format("solve-nonlinear: weak residual {:.3e} above residual_tol {:.3e}\n", residual, cfg.residual_tol);
    write_solution(cfg, res.u);
    write_report(os, res.last_report);
    log << fmt::format("solve-nonlinear: converged in {} iterations\n", res.trace.records.size());
    return kExitOk;
  } catch (const Diverged& d) {
    auto os = open_out(fs::path(cfg.out) / "trace.csv");
    write_trace(os, d.trace());
    log << "solve-nonlinear: " << d.what() << '\n';
    return kExitDiverged;
  }
}

int diagnose(const RunConfig& cfg, std::ostream& log) {
  SheetedField u = [&] {
    if (!cfg.field_file.empty()) return load_sheeted(cfg.field_file);
    BoundarySetup data = build_problem_data(cfg);
    SolveOptions opts;
    opts.threads = cfg.threads;
    opts.report_residual = false;
    return solve_dirichlet(PoissonProblem{data.phi, data.source, data.flux, cfg.mu}, opts).u;
  }();
  const fs::path out(cfg.out);
  auto summary = open_out(out / "diagnostics.txt");
  for (bool grad : {false, true}) {
    try {
      const DecayFit fit = decay_exponent(u, grad, cfg.decay_rmin, cfg.decay_rmax, cfg.threads);
      auto os = open_out(out / (grad ? "decay_gradient.csv" : "decay.csv"));
      write_decay_csv(os, fit);
      summary << fmt::format("{} = {:.17g}\n", grad ? "gradient_decay_slope" : "decay_slope", fit.slope);
    } catch (const ResolutionError& e) {
      summary << fmt::format("{} = unavailable ({})\n", grad ? "gradient_decay_slope" : "decay_slope", e.what());
    }
  }
  if (u.grid().n() == 3) {
    try {
      const FrequencyProfile prof = frequency_function(u, {0.0}, cfg.freq_radii);
      auto os = open_out(out / "frequency.csv");
      write_frequency_csv(os, prof);
    } catch (const DegenerateField& e) {
      summary << fmt::format("frequency = unavailable ({})\n", e.what());
    }
  }
  const CauchyFit cf = cauchy_bound_fit(u, cfg.cauchy_pmax, cfg.cauchy_R);
  {
    auto os = open_out(out / "cauchy.csv");
    write_cauchy_csv(os, cf);
  }
  summary << fmt::format("cauchy_C_estimate = {:.17g}\n", cf.C_estimate);
  if (cf.unreliable) summary << fmt::format("cauchy_warning = spectral tail {:.3e}\n", cf.tail_fraction);
  const BranchTrace bt = branch_set(u);
  {
    auto os = open_out(out / "branch.csv");
    os << "i_y,value\n";
    for (std::size_t y = 0; y < bt.values.size(); ++y) os << fmt::format("{},{:.17g}\n", y + 1, bt.values[y]);
  }
  summary << fmt::format("max_principle_defect = {:.17g}\n", max_principle_check(u));
  summary << fmt::format("forbidden_mode_energy = {:.17g}\n", forbidden_mode_energy(u, cfg.threads));
  summary << fmt::format("symmetry_defect = {:.17g}\n", kfold_symmetry_defect(u));
  const NormReport nr = holder_seminorm(u, cfg.mu, 1, cfg.seed, cfg.threads);
  summary << fmt::format("gradient_holder_seminorm = {:.17g}\n", nr.holder_seminorm_estimate);
  log << "diagnose: wrote " << (out / "diagnostics.txt").string() << '\n';
  return kExitOk;
}

int gen_example(const RunConfig& cfg, std::ostream& log) {
  const BoundarySetup data = build_problem_data(cfg);
  const fs::path out(cfg.out);
  save_field(out / "boundary.field", data.phi);
  if (data.source) save_field(out / "g.field", *data.source);
  if (data.flux) save_field(out / "f.field", *data.flux);
  if (data.exact) save_field(out / "exact.field", *data.exact);
  log << "gen-example: wrote " << out.string() << '\n';
  return kExitOk;
}

int cross_check(const RunConfig& cfg, std::ostream& log) {
  BoundarySetup data = build_problem_data(cfg);
  PoissonProblem p{data.phi, data.source, data.flux, cfg.mu};
  SolveOptions opts;
  opts.threads = cfg.threads;
  opts.report_residual = false;
  const SheetedField spectral = solve_dirichlet(p, opts).u;
  const SheetedField reference = direct_fd_reference(p);
  const double rel = max_diff(spectral, reference) / std::max(spectral.max_abs(), 1e-300);
  auto os = open_out(fs::path(cfg.out) / "cross_check.txt");
  os << fmt::format("relative_linf_difference = {:.17g}\n", rel);
  if (data.exact) {
    os << fmt::format("spectral_error = {:.17g}\n", max_diff(spectral, *data.exact));
    os << fmt::format("reference_error = {:.17g}\n", max_diff(reference, *data.exact));
  }
  log << fmt::format("cross-check: relative L-infinity difference {:.3e}\n", rel);
  return kExitOk;
}

}  // namespace

BoundarySetup build_problem_data(const RunConfig& cfg, int components) {
  const Grid grid(cfg.grid);
  const double scale = cfg.epsilon * cfg.boundary_amp;
  std::optional<SheetedField> exact;
  std::optional<SheetedField> source, flux;
  SheetedField phi(grid, components);

  if (cfg.boundary == "zero") {
    exact = phi;
  } else if (cfg.boundary == "harmonic" || cfg.boundary == "harmonic_kernel") {
    const int m = cfg.boundary_m != 0 ? cfg.boundary_m : grid.k();
    std::vector<SheetedField> parts;
    for (int c = 0; c < components; ++c) {
      const cplx coef = std::polar(1.0, -0.5 * std::numbers::pi * c);
      SheetedField f = gen_branched_harmonic(grid, m, coef, cfg.boundary_ymod, scale);
      if (cfg.boundary == "harmonic_kernel") {
        const double a = cfg.kernel_a;
        for (int l = 0; l < grid.q(); ++l)
          for (int i = 0; i < grid.rings(); ++i)
            for (int j = 0; j < grid.n_theta(); ++j)
              for (std::size_t y = 0; y < grid.y_count(); ++y) {
                const auto idx = grid.y_multi_index(y);
                const double t = 2.0 * std::numbers::pi * grid.y(0, idx[0]) / grid.rho(0);
                f.at(0, l, i, j, y) *= (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(t) + a * a);
              }
      }
      parts.push_back(std::move(f));
    }
    phi = stack_components(parts);
    bool modulated = cfg.boundary == "harmonic_kernel";
    for (int z : cfg.boundary_ymod) modulated = modulated || z != 0;
    if (!modulated) exact = phi;
  } else if (cfg.boundary == "manufactured") {
    if (components != 1) throw InvalidProblem("manufactured data are scalar");
    Manufactured mf = gen_manufactured(grid, cfg.manufactured);
    mf.u *= cfg.epsilon;
    mf.g *= cfg.epsilon;
    phi = mf.u;
    exact = mf.u;
    source = std::move(mf.g);
    if (mf.flux) {
      *mf.flux *= cfg.epsilon;
      flux = std::move(mf.flux);
    }
  } else if (cfg.boundary == "file") {
    phi = load_sheeted(cfg.boundary_file);
    phi *= cfg.epsilon;
  } else {
    throw InvalidProblem("unknown boundary kind " + cfg.boundary);
  }
  if (!cfg.g_file.empty()) source = load_sheeted(cfg.g_file);
  if (!cfg.f_file.empty()) flux = load_sheeted(cfg.f_file);
  return {std::move(phi), std::move(source), std::move(flux), std::move(exact)};
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out);
    if (cfg.command == "solve-poisson") return solve_poisson(cfg, log);
    if (cfg.command == "solve-nonlinear") return solve_nonlinear(cfg, log);
    if (cfg.command == "diagnose") return diagnose(cfg, log);
    if (cfg.command == "gen-example") return gen_example(cfg, log);
    if (cfg.command == "cross-check") return cross_check(cfg, log);
    log << "unknown command '" << cfg.command << "'\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Diverged& e) {
    log << "diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace branchsolve
