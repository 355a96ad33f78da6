#pragma once

#include <span>
#include <vector>

#include "branchsolve/fourier.hpp"

namespace branchsolve {

/// Complex profile on the uniform r_hat grid a = 0..A, r_hat_a = a / A; a = 0 is the axis.
using RadialProfile = std::vector<cplx>;

/// Solves the conservative discretisation of
///
///   (1/r) (r u')' - (m^2 / r^2) u - lambda(r) u = rhs(r),   u(1) = bc,
///
/// with lambda(r_hat) = q^2 r_hat^{2q-2} kappa2. Regularity at the axis is
/// u(0) = 0 for m != 0; for m = 0 the axis row balances the flux through the
/// disk of radius h/2. `rhs` is the full right-hand side on all nodes; its last
/// entry is ignored.
RadialProfile radial_solve(int m, double kappa2, int q, std::span<const cplx> rhs, cplx bc);

/// Applies the same discrete operator to u (rows 0..A-1; the boundary row returns 0).
RadialProfile radial_apply(int m, double kappa2, int q, std::span<const cplx> u);

/// Per-mode equation in the form
///   u'' + u'/r_hat - (m^2/r_hat^2) u - q^2 kappa2 r_hat^{2q-2} u = q^2 r_hat^{2q-2} rhs,
/// kappa2 = sum_j (2 pi z_j / rho_j)^2, u(1) = bc, regular at 0.
RadialProfile radial_mode_solve(int m, std::span<const int> z, int q, std::span<const double> rho,
                                std::span<const cplx> rhs, cplx bc);

inline double conformal_jacobian(int q, double rhat) {
  double p = 1.0;
  for (int i = 0; i < 2 * q - 2; ++i) p *= rhat;
  return static_cast<double>(q) * q * p;
}

}  // namespace branchsolve
