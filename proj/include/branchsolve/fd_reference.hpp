#pragma once

#include <cstddef>

#include "branchsolve/field.hpp"
#include "branchsolve/poisson.hpp"

namespace branchsolve {

/// Finite-volume solve of the same Dirichlet problem directly on the sheeted
/// polar grid in x: cells between radial midpoints, sheets glued across the cut
/// (theta = 2 pi on sheet l meets theta = 0 on sheet l+1), one axis cell per
/// y-node shared by all sheets. No unfolding and no mode filtering. Sparse
/// LDL^T solve; throws ResolutionError above `max_unknowns`.
SheetedField direct_fd_reference(const PoissonProblem& p, std::size_t max_unknowns = 500000);

}  // namespace branchsolve
