#pragma once

#include "entac/network.hpp"
#include "entac/path_stats.hpp"

namespace entac {

/// Nonnegative routing cost.
struct Cost {
  double value = 0.0;

  auto operator<=>(const Cost&) const = default;
};

/// Divergence of the two endpoints' accumulated drift over the window:
/// the Euclidean norm of chi_x - chi_y. Symmetric under endpoint swap and
/// zero for identical profiles or an empty window.
Cost connection_cost(const EntangledConnection& connection, const TimeWindow& window);

/// Sum of connection costs along the path.
Cost path_cost(const EntangledPath& path, const TimeWindow& window);

}  // namespace entac
