#pragma once

#include <iosfwd>
#include <optional>

#include "branchsolve/config.hpp"
#include "branchsolve/field.hpp"

namespace branchsolve {

enum ExitCode : int { kExitOk = 0, kExitInvariant = 2, kExitDiverged = 3, kExitIo = 4 };

struct BoundarySetup {
  SheetedField phi;
  std::optional<SheetedField> source;
  std::optional<SheetedField> flux;
  std::optional<SheetedField> exact;  // known solution, when the data come from one
};

/// Boundary and volume data described by the config, for `components` unknowns.
BoundarySetup build_problem_data(const RunConfig& cfg, int components = 1);

/// Executes cfg.command, writing into cfg.out. Messages go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace branchsolve
