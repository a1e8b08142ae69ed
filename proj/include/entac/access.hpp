#pragma once

#include <string>
#include <vector>

#include "entac/cost.hpp"
#include "entac/network.hpp"
#include "entac/path_stats.hpp"

namespace entac {

/// User tier bounding how many disjoint paths a demand may claim.
struct PriorityClass {
  std::string name;
  int m_initial = 1;
  int m_max = 1;
};

/// One source-target entanglement request with its probability band.
struct UserDemand {
  std::string user;
  std::string demand_id;
  NodeId source;
  NodeId target;
  PriorityClass priority;
  double pr_min = 0.0;  // critical lower bound on the multipath probability
  double pr_max = 1.0;  // maximal allowed value, pr_min < pr_max
};

enum class AccessStatus { Satisfied, Saturated, Infeasible };

std::string to_string(AccessStatus status);

struct AccessResult {
  std::string user;
  std::string demand_id;
  PathSet paths;
  std::vector<Cost> path_costs;
  double probability = 0.0;
  int m_final = 0;
  AccessStatus status = AccessStatus::Infeasible;
  std::string note;  // "oscillation" when the adaptation guard stopped the loop
};

/// Up to m pairwise edge-disjoint minimum-cost paths, discovery order.
///
/// Iterates cheapest-path search (ties: fewer edges, then lexicographic node
/// sequence, then level sequence) with edge removal. If greedy removal blocks
/// later paths, falls back to a min-cost-flow extraction so the returned count
/// always equals min(m, max_disjoint_supply).
std::pair<PathSet, std::vector<Cost>> find_disjoint_paths(const NetworkGraph& network,
                                                          const NodeId& source,
                                                          const NodeId& target, int m,
                                                          const TimeWindow& window);

/// Multipath probability of a path set under the integrated criterion.
double evaluate_access(const PathSet& paths, const NetworkGraph& network,
                       const TimeWindow& window);

/// One adaptation step for the path count: raise below the lower bound, lower
/// at or above the upper bound (never under 1), hold inside the band.
int adapt_m(int current_m, double probability, const UserDemand& demand);

/// Maximum number of edge-disjoint source-target paths (unit-capacity max-flow).
int max_disjoint_supply(const NetworkGraph& network, const NodeId& source, const NodeId& target);

/// Runs the full access-control loop for every demand on a fresh view of the
/// network: find paths, evaluate, adapt m until it stabilizes or hits the
/// priority cap or the disjoint-path supply.
std::vector<AccessResult> run_access_control(const NetworkGraph& network,
                                             const std::vector<UserDemand>& demands,
                                             const TimeWindow& window);

}  // namespace entac
