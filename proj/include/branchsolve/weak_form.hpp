#pragma once

#include <cstdint>
#include <vector>

#include "branchsolve/field.hpp"
#include "branchsolve/spectrum.hpp"

namespace branchsolve {

/// Mode-wise right-hand side of the unfolded equation
///
///   Delta_xi u_0 - J kappa^2 u_0 = div_xi F + J (i kappa . f_y + g),   J = q^2 r_hat^{2q-2},
///
/// where F = q r_hat^{q-1} (f_r, f_theta) is the in-plane flux pulled back to the
/// unfolded frame. The radial part of div_xi F enters as a difference of half-node
/// fluxes, so f itself is never differentiated. `flux` has n components per
/// solution component (d/dx1, d/dx2, d/dy_1, ...); either pointer may be null.
ModeSpectrum assemble_rhs(const Grid& grid, int components, const SheetedField* flux,
                          const SheetedField* source, int threads = 1);

/// The discrete operator of radial_solve applied mode by mode; the boundary row is 0.
ModeSpectrum apply_operator(const ModeSpectrum& u, int threads = 1);

/// Smooth test function supported in r_hat in [0.1, 0.95], a product of
/// (1 - t^2)^3 bumps in r_hat, theta_hat (periodic) and each y (periodic).
struct TestBump {
  double r0 = 0.5, dr = 0.1;
  double t0 = 0.0, dt = 0.5;
  std::vector<double> y0, dy;
};

std::vector<TestBump> test_bumps(const Grid& grid, std::uint64_t seed = 20240917, int count = 20);

/// Pointwise strong residual L u - R in unfolded coordinates (rows where the
/// scheme has an equation; zero on the boundary ring).
UnfoldedField discrete_residual(const SheetedField& u, const SheetedField* flux, const SheetedField* source,
                                int threads = 1);

/// max over bumps and components of |sum residual * zeta| / ||zeta||_{W^{1,1}}, where the
/// sum is the grid quadrature of the weak form.
double weak_residual_norm(const UnfoldedField& residual, const std::vector<TestBump>& bumps);

}  // namespace branchsolve
