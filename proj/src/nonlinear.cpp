#include "branchsolve/nonlinear.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fmt/core.h>
#include <numbers>
#include <ostream>
#include <random>

#include "branchsolve/holder.hpp"
#include "branchsolve/mv_core.hpp"
#include "branchsolve/parallel.hpp"
#include "branchsolve/unfold.hpp"
#include "branchsolve/weak_form.hpp"

namespace branchsolve {

namespace {

void zero_source(std::span<const double>, std::span<const double>, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Nonlinearity builtin_mse() {
  Nonlinearity nl;
  nl.id = "mse";
  nl.m = 1;
  nl.F = [](std::span<const double> P, std::span<double> out) {
    double p2 = 0.0;
    for (double x : P) p2 += x * x;
    // 1 - (1+t)^{-1/2} = t / (sqrt(1+t) (1 + sqrt(1+t))), stable for small t
    const double s = std::sqrt(1.0 + p2);
    const double factor = p2 / (s * (1.0 + s));
    for (std::size_t i = 0; i < P.size(); ++i) out[i] = P[i] * factor;
  };
  nl.G = zero_source;
  return nl;
}

Nonlinearity builtin_mss(int m) {
  if (m < 1) throw InvalidProblem("minimal surface system needs m >= 1");
  Nonlinearity nl;
  nl.id = m == 1 ? "mse" : fmt::format("mss:{}", m);
  nl.m = m;
  nl.F = [m](std::span<const double> P, std::span<double> out) {
    const int n = static_cast<int>(P.size()) / m;
    Eigen::MatrixXd Pm(m, n);
    for (int kappa = 0; kappa < m; ++kappa)
      for (int i = 0; i < n; ++i) Pm(kappa, i) = P[kappa * n + i];
    const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n) + Pm.transpose() * Pm;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    const double sqrt_det = std::sqrt(ldlt.vectorD().prod());
    // P^kappa_i - sqrt(g) g^{ij} P^kappa_j, written as (I - sqrt(g) g^{-1}) P^T
    const Eigen::MatrixXd gp = ldlt.solve(Pm.transpose());
    const Eigen::MatrixXd Fm = Pm.transpose() - sqrt_det * gp;
    for (int kappa = 0; kappa < m; ++kappa)
      for (int i = 0; i < n; ++i) out[kappa * n + i] = Fm(i, kappa);
  };
  nl.G = zero_source;
  return nl;
}

Nonlinearity nonlinearity_by_id(const std::string& id) {
  if (id == "mse") return builtin_mse();
  if (id.rfind("mss:", 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(id.substr(4));
    } catch (const std::exception&) {
      throw InvalidProblem("bad nonlinearity id " + id);
    }
    return builtin_mss(m);
  }
  throw InvalidProblem("unknown nonlinearity " + id);
}

NonlinearityProbe probe_nonlinearity(const Nonlinearity& nl, int n, int k, std::uint64_t seed) {
  NonlinearityProbe out;
  const int mn = nl.m * n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> P(mn), PR(mn), F(mn), FR(mn), Z(nl.m), G(nl.m), GR(nl.m);
  const double c = std::cos(2.0 * std::numbers::pi / k), s = std::sin(2.0 * std::numbers::pi / k);
  for (int trial = 0; trial < 64; ++trial) {
    for (double& x : P) x = normal(rng);
    for (double& x : Z) x = normal(rng);
    const double scale = 1e-3 / std::max(norm2(P), 1e-300);
    for (double& x : P) x *= scale;
    for (double& x : Z) x *= 1e-3 / std::max(norm2(Z), 1e-300);
    nl.F(P, F);
    out.quadratic_constant = std::max(out.quadratic_constant, norm2(F) / (1e-6));
    nl.G(Z, P, G);
    out.source_constant = std::max(out.source_constant, norm2(G) / (2e-6));

    // equivariance at order-one arguments
    for (double& x : P) x = normal(rng) * 0.5;
    auto rotate = [&](std::span<const double> in, std::span<double> res) {
      for (int kappa = 0; kappa < nl.m; ++kappa) {
        const double a = in[kappa * n], b = in[kappa * n + 1];
        res[kappa * n] = c * a - s * b;
        res[kappa * n + 1] = s * a + c * b;
        for (int i = 2; i < n; ++i) res[kappa * n + i] = in[kappa * n + i];
      }
    };
    rotate(P, PR);
    nl.F(P, F);
    nl.F(PR, FR);
    std::vector<double> RF(mn);
    rotate(F, RF);
    for (int i = 0; i < mn; ++i) out.equivariance_defect = std::max(out.equivariance_defect, std::abs(FR[i] - RF[i]));
    nl.G(Z, P, G);
    nl.G(Z, PR, GR);
    for (int i = 0; i < nl.m; ++i) out.equivariance_defect = std::max(out.equivariance_defect, std::abs(G[i] - GR[i]));
  }
  return out;
}

void write_trace(std::ostream& os, const IterationTrace& t) {
  os << "iter, update_norm, residual, ratio\n";
  for (const auto& r : t.records)
    os << fmt::format("{}, {:.17g}, {:.17g}, {:.17g}\n", r.iter, r.update_norm, r.residual, r.ratio);
}

NonlinearData evaluate_nonlinearity(const Nonlinearity& nl, const SheetedField& u, int threads) {
  const Grid& g = u.grid();
  const int n = g.n();
  const int m = nl.m;
  if (u.components() != m) throw DimensionError("iterate and nonlinearity disagree on m");
  const SheetedField du = gradient_x(unfold(u), threads);
  NonlinearData out{SheetedField(g, m * n), SheetedField(g, m)};
  const std::size_t per_comp_nodes = static_cast<std::size_t>(g.q()) * g.rings() * g.n_theta() * g.y_count();
  parallel_for(per_comp_nodes, threads, [&](std::size_t node) {
    std::vector<double> P(m * n), F(m * n), Z(m), G(m);
    for (int c = 0; c < m * n; ++c) P[c] = du.values()[c * per_comp_nodes + node];
    for (int c = 0; c < m; ++c) Z[c] = u.values()[c * per_comp_nodes + node];
    nl.F(P, F);
    nl.G(Z, P, G);
    for (int c = 0; c < m * n; ++c) out.flux.values()[c * per_comp_nodes + node] = F[c];
    for (int c = 0; c < m; ++c) out.source.values()[c * per_comp_nodes + node] = G[c];
  });
  return out;
}

double weak_residual(const SheetedField& u, const Nonlinearity& nl, int threads) {
  const NonlinearData data = evaluate_nonlinearity(nl, u, threads);
  const UnfoldedField res = discrete_residual(u, &data.flux, &data.source, threads);
  return weak_residual_norm(res, test_bumps(u.grid()));
}

double c1mu_surrogate(const SheetedField& u, double mu, std::uint64_t seed, int threads) {
  const SheetedField du = gradient_x(unfold(u), threads);
  double sup_du = 0.0;
  const std::size_t nodes = du.size() / du.components();
  for (std::size_t node = 0; node < nodes; ++node) {
    double s = 0.0;
    for (int c = 0; c < du.components(); ++c) s += du.values()[c * nodes + node] * du.values()[c * nodes + node];
    sup_du = std::max(sup_du, std::sqrt(s));
  }
  const NormReport h = holder_seminorm(du, mu, 0, seed, threads);
  return u.max_abs() + sup_du + h.holder_seminorm_estimate;
}

PicardResult picard_solve(const Nonlinearity& nl, const SheetedField& phi, const PicardOptions& opts) {
  if (phi.components() != nl.m) throw DimensionError("boundary data and nonlinearity disagree on m");
  if (opts.tol <= 0.0 || opts.residual_tol <= 0.0 || opts.max_iters < 1)
    throw InvalidProblem("tolerances must be positive");
  const Grid& g = phi.grid();
  const double phi_defect = kfold_symmetry_defect(phi);
  SolveOptions so;
  so.threads = opts.threads;
  so.report_residual = false;

  PicardResult result{SheetedField(g, nl.m), {}, {}};
  SheetedField& u = result.u;
  u.set_axis(std::vector<double>(static_cast<std::size_t>(nl.m) * g.y_count(), 0.0));
  int growth = 0;
  double previous = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    PoissonProblem p{phi, std::nullopt, std::nullopt, opts.mu};
    if (it > 1) {
      NonlinearData data = evaluate_nonlinearity(nl, u, opts.threads);
      p.flux = std::move(data.flux);
      p.source = std::move(data.source);
    }
    PoissonSolution next = solve_dirichlet(p, so);
    SheetedField update = next.u - u;
    if (opts.relaxation != 1.0) update *= opts.relaxation;
    u += update;

    IterationRecord rec;
    rec.iter = it;
    rec.update_norm = c1mu_surrogate(update, opts.mu, opts.seed, opts.threads);
    rec.ratio = previous > 0.0 ? rec.update_norm / previous : 0.0;
    rec.residual = weak_residual(u, nl, opts.threads);
    rec.symmetry_defect = kfold_symmetry_defect(u);
    result.trace.records.push_back(rec);
    result.last_report = next.report;

    if (rec.symmetry_defect > phi_defect + 1e-10 * std::max(1.0, u.max_abs()))
      throw InvariantViolation(fmt::format("iterate {} lost k-fold symmetry (defect {:.3e})", it, rec.symmetry_defect));
    if (!std::isfinite(rec.update_norm)) throw Diverged("update norm is not finite", result.trace);
    growth = (previous > 0.0 && rec.update_norm > previous) ? growth + 1 : 0;
    previous = rec.update_norm;
    if (rec.update_norm <= opts.tol) {
      result.trace.converged = true;
      break;
    }
    if (growth >= 3)
      throw Diverged(fmt::format("update norm grew for 3 consecutive iterations (iteration {})", it), result.trace);
  }
  return result;
}

}  // namespace branchsolve
