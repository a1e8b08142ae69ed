#include "entac/path_stats.hpp"

#include <cmath>
#include <unordered_set>

#include "entac/errors.hpp"

namespace entac {

std::vector<NodeId> node_sequence(const EntangledPath& path) {
  std::vector<NodeId> seq{path.source};
  NodeId current = path.source;
  for (const auto& edge : path.edges) {
    if (edge.endpoint_x == current) {
      current = edge.endpoint_y;
    } else if (edge.endpoint_y == current) {
      current = edge.endpoint_x;
    } else {
      throw ContractError("path edges do not form a chain at node \"" + current + "\"");
    }
    seq.push_back(current);
  }
  if (current != path.target) {
    throw ContractError("path does not end at its target node");
  }
  return seq;
}

bool edge_disjoint(const PathSet& set) {
  std::unordered_set<EntangledConnection::Key, ConnectionKeyHash> used;
  for (const auto& path : set.paths) {
    for (const auto& edge : path.edges) {
      if (!used.insert(edge.key()).second) {
        return false;
      }
    }
  }
  return true;
}

namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability " + std::to_string(p) + " outside [0, 1]");
  }
}

}  // namespace

double single_path_probability(const std::vector<double>& per_edge_pass) {
  double product = 1.0;
  for (double p : per_edge_pass) {
    require_probability(p);
    product *= p;
  }
  return product;
}

double single_path_probability_iid(const DensityModel& density, double bound, int g) {
  if (g < 0) {
    throw DomainError("edge count g must be >= 0");
  }
  return std::pow(cdf(density, bound), g);
}

double multipath_probability(const std::vector<double>& per_path_probs) {
  double miss = 1.0;
  for (double p : per_path_probs) {
    require_probability(p);
    miss *= 1.0 - p;
  }
  return 1.0 - miss;
}

double path_probability(const EntangledPath& path, const NetworkDefaults& defaults,
                        const TimeWindow& window, PathMode mode) {
  std::vector<double> per_edge;
  per_edge.reserve(path.edges.size());
  for (const auto& edge : path.edges) {
    // Critical-fidelity eligibility is a precheck, not a probability factor.
    NodeState sx = edge.state_at_x;
    NodeState sy = edge.state_at_y;
    if (mode == PathMode::Integrated) {
      sx = evolve_state(sx, edge.profile_x, window).first;
      sy = evolve_state(sy, edge.profile_y, window).first;
    }
    if (sx.fidelity < defaults.f_crit || sy.fidelity < defaults.f_crit) {
      return 0.0;
    }
    const double bound = (mode == PathMode::Integrated) ? resolved_gamma_max(edge, defaults)
                                                        : defaults.f_delta_max;
    per_edge.push_back(cdf(defaults.density, bound));
  }
  return single_path_probability(per_edge);
}

double pathset_probability(const PathSet& set, const NetworkDefaults& defaults,
                           const TimeWindow& window, PathMode mode) {
  if (!edge_disjoint(set)) {
    throw ContractError("path set is not edge-disjoint");
  }
  std::vector<double> per_path;
  per_path.reserve(set.paths.size());
  for (const auto& path : set.paths) {
    per_path.push_back(path_probability(path, defaults, window, mode));
  }
  return multipath_probability(per_path);
}

}  // namespace entac
