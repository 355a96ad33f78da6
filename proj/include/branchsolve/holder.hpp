#pragma once

#include <cstdint>
#include <vector>

#include "branchsolve/field.hpp"

namespace branchsolve {

struct NormReport {
  double sup_abs = 0.0;
  double holder_mu = 1.0;
  double holder_seminorm_estimate = 0.0;
  /// [u_l] on {x2 > 0} plus [u_l] on {x2 < 0}, per sheet; the total is their sum.
  std::vector<double> per_sheet;
};

/// Sampled estimate of the sheet-by-sheet, half-plane-by-half-plane Holder
/// seminorm of f (derivative_order 0) or of D f (derivative_order 1, gradient
/// via the unfolded grid). Pairs: every pair inside a ring (dyadic strides on
/// large rings), pairs along rays at dyadic radial gaps, and a seeded random
/// sample. The estimate is a lower bound of the true seminorm. Values of the
/// vector-valued field are compared in the Euclidean norm.
NormReport holder_seminorm(const SheetedField& f, double mu, int derivative_order = 0,
                           std::uint64_t seed = 7, int threads = 1);

}  // namespace branchsolve
