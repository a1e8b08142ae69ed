#include "entac/cost.hpp"

#include <cmath>

namespace entac {

Cost connection_cost(const EntangledConnection& connection, const TimeWindow& window) {
  const ChiVector cx = chi(connection.profile_x, window);
  const ChiVector cy = chi(connection.profile_y, window);
  return Cost{std::hypot(cx.d_prob - cy.d_prob, cx.d_fid - cy.d_fid)};
}

Cost path_cost(const EntangledPath& path, const TimeWindow& window) {
  double total = 0.0;
  for (const auto& edge : path.edges) {
    total += connection_cost(edge, window).value;
  }
  return Cost{total};
}

}  // namespace entac
