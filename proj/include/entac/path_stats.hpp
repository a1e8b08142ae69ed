#pragma once

#include <vector>

#include "entac/network.hpp"

namespace entac {

/// An ordered chain of entangled connections from source to target.
struct EntangledPath {
  NodeId source;
  NodeId target;
  std::vector<EntangledConnection> edges;

  std::size_t g() const { return edges.size(); }
};

/// A set of pairwise edge-disjoint paths between one node pair.
struct PathSet {
  std::vector<EntangledPath> paths;

  std::size_t size() const { return paths.size(); }
  bool empty() const { return paths.empty(); }
};

/// Which per-edge criterion drives the pass probability.
enum class PathMode {
  FidelityOnly,  // fidelity-distance bound f_delta_max
  Integrated,    // state-distance bound gamma_max (per-edge override aware)
};

/// Node ids visited by the path, source first. Raises ContractError if the
/// edges do not chain from source to target.
std::vector<NodeId> node_sequence(const EntangledPath& path);

/// True iff no connection appears in two paths of the set.
bool edge_disjoint(const PathSet& set);

/// Product of independent per-edge pass probabilities; 1 for an empty list.
double single_path_probability(const std::vector<double>& per_edge_pass);

/// Pass probability for g i.i.d. edges: cdf(density, bound)^g.
double single_path_probability_iid(const DensityModel& density, double bound, int g);

/// 1 - prod(1 - p_S) over edge-disjoint path probabilities.
double multipath_probability(const std::vector<double>& per_path_probs);

/// Probability of one path under the chosen criterion. Every endpoint must
/// satisfy the critical fidelity bound (evolved over the window in integrated
/// mode, at t0 in fidelity-only mode) or the path is ineligible and scores 0.
double path_probability(const EntangledPath& path, const NetworkDefaults& defaults,
                        const TimeWindow& window, PathMode mode);

/// Combined probability of an edge-disjoint path set: per-path probabilities
/// combined via the multipath complement product. Disjointness violations
/// raise ContractError.
double pathset_probability(const PathSet& set, const NetworkDefaults& defaults,
                           const TimeWindow& window, PathMode mode);

}  // namespace entac
