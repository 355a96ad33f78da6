#pragma once

#include <span>

#include "branchsolve/field.hpp"

namespace branchsolve {

/// Sheeted node (sheet l, angle j) <-> unfolded angle b = l * n_theta + j.
inline int unfolded_angle_index(const Grid& grid, int sheet, int j) { return sheet * grid.n_theta() + j; }

/// u_0(r_hat e^{i theta_hat}, y) = u_l(r_hat^q e^{i q theta_hat}, y).
/// The axis value comes from the sheeted axis trace when present, otherwise it
/// is extrapolated from the angular mean of the two innermost rings.
UnfoldedField unfold(const SheetedField& f);

/// Inverse of unfold; the unfolded axis value becomes the sheeted axis trace.
SheetedField fold(const UnfoldedField& g);

/// D_x and D_y of every component of g, returned on the sheets. Component
/// c * n + d holds d/dx1, d/dx2, d/dy_1, ... of component c. Radial
/// derivatives are centred differences in r_hat (the axis value closes the
/// stencil of the first ring), angular and y derivatives are spectral.
/// The gradient at the axis is left undefined: the result carries no axis trace.
SheetedField gradient_x(const UnfoldedField& g, int threads = 1);

/// Same derivatives expressed in the unfolded frame: d/dr_hat, (1/r_hat) d/dtheta_hat,
/// d/dy_1, ... per component, unscaled.
UnfoldedField gradient_xi_polar(const UnfoldedField& g, int threads = 1);

/// Unfolded angular mode m survives average-freeness (m != 0 mod q) and
/// k-fold symmetry (m = 0 mod k). The y-mode is unrestricted.
bool mode_admissible(int m, std::span<const int> z, int q, int k);
bool mode_admissible(int m, int q, int k);

/// Modes carried by the average part: m = 0 mod q.
inline bool mode_average(int m, int q) { return m % q == 0; }

/// Neither average nor admissible.
inline bool mode_forbidden(int m, int q, int k) { return m % q != 0 && m % k != 0; }

}  // namespace branchsolve
