#pragma once

#include <optional>
#include <vector>

#include "branchsolve/field.hpp"
#include "branchsolve/fourier.hpp"

namespace branchsolve {

/// u_l(r e^{i theta}, y) = amp Re(c r^{m/q} e^{i (m/q)(theta + 2 pi (l-1))}) Y(y), with
/// Y = 1 for z = 0 and cos(2 pi z.y / rho) otherwise (a y-modulated field is
/// test data only: it is not harmonic). Unfolds to amp Re(c w^m) Y(y).
/// Refuses modes failing mode_admissible unless `allow_inadmissible`.
SheetedField gen_branched_harmonic(const Grid& grid, int m, cplx c = 1.0, std::vector<int> z = {},
                                   double amp = 1.0, bool allow_inadmissible = false);

/// One term of a manufactured solution, in unfolded form with
/// E = exp(i (m theta_hat + 2 pi z.y / rho)) and p(r) = r^|m| exp(-beta r^2):
///   u_0      = Re(amplitude p E)
///   F_r      = Re(flux_r r p E),   F_theta = Re(flux_theta r p E)   (unfolded-frame flux)
///   f_y[d]   = Re(flux_y[d] p E)
struct ManufacturedMode {
  int m = 3;
  std::vector<int> z;
  cplx amplitude = 1.0;
  double beta = 0.5;
  cplx flux_r = 0.0;
  cplx flux_theta = 0.0;
  std::vector<cplx> flux_y;  // empty or one entry per y-dimension
};

struct Manufactured {
  SheetedField u;
  SheetedField g;
  std::optional<SheetedField> flux;  // present when some mode has a flux term
};

/// Builds u from the mode list and g = Delta u - div f from the exact per-mode
/// operator, so solve_dirichlet(trace of u, f, g) recovers u up to the
/// discretisation error.
Manufactured gen_manufactured(const Grid& grid, const std::vector<ManufacturedMode>& modes);

}  // namespace branchsolve
