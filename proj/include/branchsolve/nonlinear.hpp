#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "branchsolve/error.hpp"
#include "branchsolve/field.hpp"
#include "branchsolve/poisson.hpp"

namespace branchsolve {

/// Quasilinear structure of Delta u = div F(Du) + G(u, Du) for u : R^n -> R^m.
/// P is stored component-major: P[kappa * n + i] = D_i u^kappa, and F returns the
/// same layout, F[kappa * n + i] = F^i_kappa.
struct Nonlinearity {
  std::string id;
  int m = 1;
  std::function<void(std::span<const double> P, std::span<double> out)> F;
  std::function<void(std::span<const double> Z, std::span<const double> P, std::span<double> out)> G;
};

/// Minimal surface equation: F(P) = P (1 - (1 + |P|^2)^{-1/2}), G = 0.
Nonlinearity builtin_mse();

/// Graphical minimal surface system for u : R^n -> R^m:
/// F^i_kappa(P) = P^kappa_i - sqrt(det g) g^{ij} P^kappa_j, g_ij = delta_ij + P^kappa_i P^kappa_j.
/// m = 1 reproduces builtin_mse.
Nonlinearity builtin_mss(int m);

/// Looks up `mse` or `mss:<m>`.
Nonlinearity nonlinearity_by_id(const std::string& id);

struct NonlinearityProbe {
  double quadratic_constant = 0.0;  // max |F(P)| / |P|^2 over small probes
  double source_constant = 0.0;     // max |G(Z,P)| / |(Z,P)|^2
  double equivariance_defect = 0.0;
};

/// Checks F(0) = 0, DF(0) = 0, G(0,0) = 0, DG(0,0) = 0 on probes of size 1e-3 and
/// the rotation equivariance F(P R) = R^T-action F(P) for the 2 pi / k rotation.
NonlinearityProbe probe_nonlinearity(const Nonlinearity& nl, int n, int k, std::uint64_t seed = 11);

struct IterationRecord {
  int iter = 0;
  double update_norm = 0.0;
  double residual = 0.0;
  double ratio = 0.0;  // update_norm / previous update_norm; 0 on the first iteration
  double symmetry_defect = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
};

void write_trace(std::ostream& os, const IterationTrace& t);

struct PicardOptions {
  double tol = 1e-9;
  double residual_tol = 1e-8;
  int max_iters = 30;
  double relaxation = 1.0;  // u <- u + relaxation * (T(u) - u)
  double mu = 0.25;         // Holder exponent of the update-norm surrogate
  int threads = 1;
  std::uint64_t seed = 7;
};

class Diverged : public Error {
 public:
  Diverged(const std::string& what, IterationTrace trace) : Error(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct PicardResult {
  SheetedField u;
  IterationTrace trace;
  SolveReport last_report;
};

/// u^0 = 0, u^{j+1} = T(u^j) where T(v) solves the Dirichlet problem with
/// boundary data phi, flux F(Dv) and source G(v, Dv). Stops once the update
/// norm sup|du| + sup|D du| + [D du]_mu drops to tol. Throws Diverged when the
/// update norm grows three iterations in a row.
PicardResult picard_solve(const Nonlinearity& nl, const SheetedField& phi, const PicardOptions& opts = {});

/// Flux F(Du) and source G(u, Du) of an iterate, sheet by sheet.
struct NonlinearData {
  SheetedField flux;
  SheetedField source;
};
NonlinearData evaluate_nonlinearity(const Nonlinearity& nl, const SheetedField& u, int threads = 1);

/// Discrete weak residual of Delta u = div F(Du) + G(u, Du) against the seeded
/// family of test bumps, normalised by ||zeta||_{W^{1,1}}.
double weak_residual(const SheetedField& u, const Nonlinearity& nl, int threads = 1);

/// sup|u| + sup|Du| + sampled [Du]_mu, the surrogate of the C^{1,mu;q} norm.
double c1mu_surrogate(const SheetedField& u, double mu, std::uint64_t seed = 7, int threads = 1);

}  // namespace branchsolve
