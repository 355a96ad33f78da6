#pragma once

#include <span>
#include <vector>

namespace branchsolve {

/// Minimum-cost perfect matching on a dense n x n cost matrix (row-major),
/// O(n^3) Hungarian method with row/column potentials. Returns col[row].
std::vector<int> min_cost_assignment(std::span<const double> cost, int n);

}  // namespace branchsolve
