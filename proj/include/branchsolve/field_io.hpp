#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "branchsolve/field.hpp"

namespace branchsolve {

/// Text container: `key = value` header (representation, q, k, n, N_r,
/// N_theta, N_y_<d>, rho_<d>, m), a blank line, then CSV records
/// `sheet, i_r, i_theta, i_y..., value...`. Sheets and ring/angle indices are
/// 1-based; the axis trace, when present, is written as sheet 0, i_r 0,
/// i_theta 0. Unfolded fields use sheet 1 and the unfolded angle index.
/// Floats carry 17 significant digits, so write/read round-trips exactly.
void write_field(std::ostream& os, const SheetedField& f);
void write_field(std::ostream& os, const UnfoldedField& f);

using AnyField = std::variant<SheetedField, UnfoldedField>;
AnyField read_field(std::istream& is);

void save_field(const std::filesystem::path& path, const SheetedField& f);
SheetedField load_sheeted(const std::filesystem::path& path);

}  // namespace branchsolve
