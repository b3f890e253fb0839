#pragma once

#include <vector>

namespace densemap {

/// Minimum-cost assignment on a dense n x m cost matrix (rows <= columns
/// after internal transposition). Returns, for each row, the assigned column
/// index. O(n^2 m) shortest-augmenting-path implementation with potentials;
/// deterministic.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

} // namespace densemap
