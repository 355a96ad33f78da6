#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "branchsolve/field.hpp"

namespace branchsolve {

/// Dirichlet problem Delta u = div f + g on the cylinder with u = phi on r = 1.
/// Only the outermost ring of `boundary` is used. `flux` carries n components
/// per solution component, `source` one.
struct PoissonProblem {
  SheetedField boundary;
  std::optional<SheetedField> source;
  std::optional<SheetedField> flux;
  double mu = 0.25;

  const Grid& grid() const { return boundary.grid(); }
  int components() const { return boundary.components(); }
};

struct SolveOptions {
  int threads = 1;
  double symmetry_tol = 1e-8;  // relative to the data size
  int m_max = -1;              // < 0: up to the angular Nyquist frequency
  int z_max = -1;              // < 0: up to the y Nyquist frequency
  bool report_residual = true;
  std::uint64_t residual_seed = 20240917;
};

struct SolveReport {
  double forbidden_mode_energy = 0.0;
  double boundary_error = 0.0;
  double weak_residual = 0.0;
  std::size_t modes_solved = 0;
  double wall_time_ms = 0.0;
  std::vector<std::string> warnings;
};

struct PoissonSolution {
  SheetedField u;
  SolveReport report;
};

/// Splits the data into the average part (unfolded modes m = 0 mod q) and the
/// average-free part (modes passing mode_admissible), solves every retained
/// (m, z) mode with radial_solve and folds the synthesis back onto the sheets.
/// Throws InvariantViolation if phi, g or f break the k-fold symmetry.
PoissonSolution solve_dirichlet(const PoissonProblem& p, const SolveOptions& opts = {});

/// Relative energy of unfolded modes that are neither average nor admissible.
double forbidden_mode_energy(const SheetedField& u, int threads = 1);

void write_report(std::ostream& os, const SolveReport& r);

}  // namespace branchsolve
