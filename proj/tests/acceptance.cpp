#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "branchsolve/app.hpp"
#include "branchsolve/config.hpp"
#include "branchsolve/diagnostics.hpp"
#include "branchsolve/fd_reference.hpp"
#include "branchsolve/generators.hpp"
#include "branchsolve/mv_core.hpp"
#include "branchsolve/nonlinear.hpp"
#include "branchsolve/poisson.hpp"
#include "branchsolve/quadrature.hpp"

using namespace branchsolve;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void verdict(int id, bool ok, const std::string& name, const std::string& detail) {
  lines[id] = fmt::format("[{}] criterion {:2d} {}: {}", ok ? "PASS" : "FAIL", id, name, detail);
  if (!ok) ++failures;
}

RunConfig fixture(const std::string& name) { return load_config(fs::path(BRANCHSOLVE_FIXTURES) / name); }

double max_diff(const SheetedField& a, const SheetedField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PicardOptions picard_options(const RunConfig& cfg, int threads) {
  PicardOptions o;
  o.tol = cfg.tol;
  o.residual_tol = cfg.residual_tol;
  o.max_iters = cfg.max_iters;
  o.relaxation = cfg.relaxation;
  o.mu = cfg.mu;
  o.threads = threads;
  o.seed = cfg.seed;
  return o;
}

std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string without_timing(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind("wall_time_ms", 0) != 0) out += line + "\n";
  return out;
}

int run_cli(const std::string& command, const std::string& cfg, const fs::path& out, int threads) {
  const std::string cmd = fmt::format("{} {} --config {}/{} --out {} --threads {} 2>/dev/null", BRANCHSOLVE_CLI,
                                      command, BRANCHSOLVE_FIXTURES, cfg, out.string(), threads);
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  const int threads = 4;
  std::vector<double> max_principle;
  std::vector<std::pair<std::string, double>> forbidden;

  // 1, 3: branched harmonic reproduction and decay
  {
    RunConfig cfg = fixture("q2k3_harmonic.cfg");
    std::vector<double> errs;
    double runtime = 0.0;
    SheetedField finest(Grid(cfg.grid), 1);
    for (int n : {257, 513, 1025}) {
      cfg.grid.n_rhat = n;
      const auto data = build_problem_data(cfg, 1);
      SolveOptions so;
      so.threads = 1;
      const auto t0 = std::chrono::steady_clock::now();
      auto sol = solve_dirichlet(PoissonProblem{data.phi, data.source, data.flux, cfg.mu}, so);
      if (n == 1025) runtime = seconds_since(t0);
      errs.push_back(max_diff(sol.u, *data.exact));
      max_principle.push_back(max_principle_check(sol.u));
      if (n == 1025) {
        forbidden.emplace_back("q2k3_harmonic", sol.report.forbidden_mode_energy);
        finest = std::move(sol.u);
      }
    }
    const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
    const bool ok = errs[2] <= 1e-6 && r1 >= 3.6 && r1 <= 4.4 && r2 >= 3.6 && r2 <= 4.4 && runtime <= 10.0;
    verdict(1, ok, "branched-harmonic reproduction",
            fmt::format("max error {:.3e} at N=1025 (<= 1e-6), ratios {:.3f} {:.3f} (in [3.6, 4.4]), "
                        "single-thread solve {:.3f} s (<= 10 s)", errs[2], r1, r2, runtime));

    const auto du = decay_exponent(finest, false, 1e-6, 1e-2, threads);
    const auto dg = decay_exponent(finest, true, 1e-6, 1e-2, threads);
    const bool ok3 = du.slope >= 1.48 && du.slope <= 1.52 && dg.slope >= 0.48 && dg.slope <= 0.52;
    verdict(3, ok3, "decay exponent",
            fmt::format("slope of sup|u| {:.4f} (in [1.48, 1.52]), slope of sup|Du| {:.4f} (in [0.48, 0.52])",
                        du.slope, dg.slope));
  }

  // 4: manufactured solutions with flux, both shipped manufactured fixtures
  {
    bool ok = true;
    std::string detail;
    for (const char* name : {"q2k3_manufactured.cfg", "q3k4_manufactured.cfg"}) {
      RunConfig cfg = fixture(name);
      std::vector<double> errs;
      double residual = 0.0;
      for (int n : {65, 129, 257}) {
        cfg.grid.n_rhat = n;
        const auto data = build_problem_data(cfg, 1);
        SolveOptions so;
        so.threads = threads;
        const auto sol = solve_dirichlet(PoissonProblem{data.phi, data.source, data.flux, cfg.mu}, so);
        errs.push_back(max_diff(sol.u, *data.exact));
        residual = std::max(residual, sol.report.weak_residual);
        if (n == 65) forbidden.emplace_back(name, sol.report.forbidden_mode_energy);
        ok = ok && data.flux.has_value();
      }
      const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
      ok = ok && r1 >= 3.6 && r1 <= 4.4 && r2 >= 3.6 && r2 <= 4.4 && residual <= 1e-8;
      detail += fmt::format("{}: errors {:.3e} {:.3e} {:.3e}, ratios {:.3f} {:.3f}, weak residual {:.2e}; ", name,
                            errs[0], errs[1], errs[2], r1, r2, residual);
    }
    verdict(4, ok, "manufactured Poisson with flux", detail + "(ratio 4 +- 10%, residual <= 1e-8)");
  }

  // 5, 8: Picard iterations on the shipped nonlinear fixtures
  {
    const RunConfig cfg = fixture("mse_eps1e-3.cfg");
    const auto data = build_problem_data(cfg, 1);
    const auto t0 = std::chrono::steady_clock::now();
    const auto mse = picard_solve(nonlinearity_by_id(cfg.nonlinearity), data.phi, picard_options(cfg, threads));
    const double mse_time = seconds_since(t0);
    forbidden.emplace_back("mse_eps1e-3", forbidden_mode_energy(mse.u, threads));
    bool mse_ok = mse.trace.converged && mse.trace.records.back().update_norm <= 1e-9 &&
                  static_cast<int>(mse.trace.records.size()) <= 30;
    double worst_ratio = 0.0;
    std::string ratios;
    for (const auto& r : mse.trace.records) {
      if (r.iter >= 2) ratios += fmt::format(" {:.2e}", r.ratio);
      if (r.iter >= 3) worst_ratio = std::max(worst_ratio, r.ratio);
    }
    mse_ok = mse_ok && worst_ratio <= 0.5;

    const RunConfig cfg2 = fixture("mss2_eps1e-3.cfg");
    const auto nl2 = nonlinearity_by_id(cfg2.nonlinearity);
    const auto data2 = build_problem_data(cfg2, nl2.m);
    const auto mss = picard_solve(nl2, data2.phi, picard_options(cfg2, threads));
    forbidden.emplace_back("mss2_eps1e-3", forbidden_mode_energy(mss.u, threads));
    double mss_ratio = 0.0;
    for (const auto& r : mss.trace.records)
      if (r.iter >= 2) mss_ratio = std::max(mss_ratio, r.ratio);
    const bool mss_ok = mss.trace.converged && static_cast<int>(mss.trace.records.size()) <= 30 && mss_ratio < 1.0;
    verdict(5, mse_ok && mss_ok, "Picard contraction",
            fmt::format("MSE converged={} in {} iterations ({:.1f} s), final update {:.2e} (<= 1e-9), ratios{}, "
                        "max from iteration 3 {:.2e} (<= 0.5); MSS m=2 converged={} in {} iterations, max ratio {:.2e} (< 1)",
                        mse.trace.converged, mse.trace.records.size(), mse_time, mse.trace.records.back().update_norm,
                        ratios, worst_ratio, mss.trace.converged, mss.trace.records.size(), mss_ratio));

    const auto c4 = cauchy_bound_fit(mse.u, 4, cfg.cauchy_R);
    const auto c6 = cauchy_bound_fit(mse.u, 6, cfg.cauchy_R);
    const double change = std::abs(c6.C_estimate - c4.C_estimate) / std::max(c4.C_estimate, c6.C_estimate);
    verdict(8, mse.trace.converged && c4.C_estimate > 0.0 && change < 0.2, "Cauchy bound stability",
            fmt::format("C_estimate {:.4f} (p_max=4), {:.4f} (p_max=6), relative change {:.2e} (< 0.2), "
                        "spectral tail {:.1e}", c4.C_estimate, c6.C_estimate, change, c6.tail_fraction));
  }

  // 2: forbidden-mode energy on every shipped fixture
  {
    bool ok = true;
    std::string detail;
    for (const auto& [name, e] : forbidden) {
      ok = ok && e <= 1e-12;
      detail += fmt::format("{} {:.2e}; ", name, e);
    }
    verdict(2, ok && forbidden.size() == 5, "mode congruences", detail + "(<= 1e-12)");
  }

  // 6: spectral solver against the direct finite-difference reference
  {
    const RunConfig cfg = fixture("q2k3_manufactured.cfg");
    const auto data = build_problem_data(cfg, 1);
    const PoissonProblem p{data.phi, data.source, data.flux, cfg.mu};
    SolveOptions so;
    so.threads = threads;
    const auto sol = solve_dirichlet(p, so);
    const auto t0 = std::chrono::steady_clock::now();
    const auto ref = direct_fd_reference(p);
    const double rel = max_diff(sol.u, ref) / sol.u.max_abs();
    verdict(6, rel <= 0.02, "oracle equivalence",
            fmt::format("{}x{}x{} grid, relative L-infinity difference {:.3e} (<= 2e-2), reference solve {:.1f} s",
                        cfg.grid.n_rhat, cfg.grid.n_theta_hat, cfg.grid.n_y[0], rel, seconds_since(t0)));
  }

  // 7: frequency function
  {
    GridSpec spec;
    const Grid g(spec);
    const SheetedField h = gen_branched_harmonic(g, 3);
    const auto hom = frequency_function(h, {0.0}, {0.1, 0.2, 0.4});
    const auto [lo, hi] = std::minmax_element(hom.values.begin(), hom.values.end());
    const SheetedField two = h + gen_branched_harmonic(g, 9, 0.7);
    const auto mixed = frequency_function(two, {0.0}, {0.05, 0.1, 0.2, 0.4});
    bool monotone = true;
    for (std::size_t i = 1; i < mixed.values.size(); ++i) monotone = monotone && mixed.values[i] >= mixed.values[i - 1] - 1e-6;
    const double n05 = frequency_function(h, {0.0}, {0.05}).values[0];
    const double floor = static_cast<double>(g.k()) / g.q() - 0.02;
    const bool ok = *hi - *lo <= 1e-3 && monotone && n05 >= floor;
    verdict(7, ok, "frequency function",
            fmt::format("homogeneous N {:.6f} {:.6f} {:.6f} (spread {:.1e} <= 1e-3); two-mode N {:.6f} {:.6f} {:.6f} {:.6f} "
                        "(nondecreasing, slack 1e-6); N(0.05) {:.6f} (>= {:.2f})",
                        hom.values[0], hom.values[1], hom.values[2], *hi - *lo, mixed.values[0], mixed.values[1],
                        mixed.values[2], mixed.values[3], n05, floor));
  }

  // 9: functional inequalities and maximum principle
  {
    const Grid g{GridSpec{}};
    const auto p = poincare_ratios(g, 100, 42);
    const auto s = sobolev_ratios(g, 100, 43);
    const double worst_mp = *std::max_element(max_principle.begin(), max_principle.end());
    const bool ok = p.max < 10.0 && s.max < 20.0 && worst_mp <= 1e-8;
    verdict(9, ok, "functional inequalities",
            fmt::format("Poincare max {:.4f} mean {:.4f} (< 10), Sobolev max {:.4f} mean {:.4f} (< 20), "
                        "maximum-principle defect {:.2e} over {} harmonic solves (<= 1e-8)",
                        p.max, p.mean, s.max, s.mean, worst_mp, max_principle.size()));
  }

  // 10: determinism across thread counts, through the command line
  {
    const fs::path root = fs::temp_directory_path() / "branchsolve_acceptance";
    fs::remove_all(root);
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<std::string, std::string>> runs{{"solve-poisson", "q2k3_manufactured.cfg"},
                                                                 {"solve-nonlinear", "mse_eps1e-3.cfg"}};
    for (const auto& [command, cfg] : runs) {
      std::vector<std::string> outputs;
      for (int t : {1, 4, 8}) {
        const fs::path out = root / fmt::format("{}_{}", cfg, t);
        const int code = run_cli(command, cfg, out, t);
        ok = ok && code == 0;
        std::string all;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(out)) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) all += f.filename().string() + "\n" + without_timing(read_text(f));
        outputs.push_back(std::move(all));
      }
      const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
      ok = ok && same && !outputs[0].empty();
      detail += fmt::format("{} {}: {}; ", command, cfg, same ? "identical" : "DIFFERENT");
    }
    verdict(10, ok, "determinism", detail + "threads 1, 4, 8, wall-clock lines excluded");
  }

  for (const auto& [id, line] : lines) fmt::print("{}\n", line);
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
