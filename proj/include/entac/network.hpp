#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "entac/density.hpp"
#include "entac/dynamics.hpp"

namespace entac {

using NodeId = std::string;

/// An L-level entangled connection between two nodes. Each endpoint keeps its
/// own view of the shared state (the two views may disagree) and its own
/// drift profile.
struct EntangledConnection {
  NodeId endpoint_x;
  NodeId endpoint_y;
  int level = 1;
  NodeState state_at_x;
  NodeState state_at_y;
  EvolutionProfile profile_x;
  EvolutionProfile profile_y;
  std::optional<double> gamma_max;  // per-edge override of the network default

  /// Canonical identity: unordered endpoint pair plus level.
  struct Key {
    NodeId a;
    NodeId b;
    int level;
    bool operator==(const Key&) const = default;
  };
  Key key() const;
};

struct ConnectionKeyHash {
  std::size_t operator()(const EntangledConnection::Key& k) const;
};

/// Network-wide defaults used when a connection carries no override.
struct NetworkDefaults {
  double gamma_max = 0.02;
  double f_crit = 0.98;
  double f_delta_max = 0.02;
  DensityModel density = DensityModel::exponential(100.0);
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Immutable snapshot of the entangled network. All queries are pure.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(std::vector<NodeId> nodes, std::vector<EntangledConnection> connections,
               NetworkDefaults defaults);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<EntangledConnection>& connections() const { return connections_; }
  const NetworkDefaults& defaults() const { return defaults_; }

  bool has_node(const NodeId& node) const { return node_set_.count(node) > 0; }

 private:
  std::vector<NodeId> nodes_;
  std::vector<EntangledConnection> connections_;
  NetworkDefaults defaults_;
  std::unordered_set<NodeId> node_set_;
  std::unordered_map<NodeId, std::vector<std::size_t>> adjacency_;

  friend std::vector<std::pair<NodeId, EntangledConnection>> neighbors(const NetworkGraph&,
                                                                       const NodeId&);
  friend std::vector<std::size_t> incident_connections(const NetworkGraph&, const NodeId&);
};

/// Number of hops spanned by a connection: 2^(level - 1). The number of
/// intermediate nodes is the return value minus one.
std::int64_t hop_distance(const EntangledConnection& connection);

/// Checks every structural invariant and reports all violations.
ValidationReport validate(const NetworkGraph& network);

/// All connections incident to a node, paired with the opposite endpoint and
/// ordered by (opposite id, level). Unknown node raises LookupError.
std::vector<std::pair<NodeId, EntangledConnection>> neighbors(const NetworkGraph& network,
                                                              const NodeId& node);

/// Indices into network.connections() for edges incident to a node, in
/// neighbors() order. Unknown node raises LookupError.
std::vector<std::size_t> incident_connections(const NetworkGraph& network, const NodeId& node);

/// Per-edge override if present, else the network default.
double resolved_gamma_max(const EntangledConnection& connection, const NetworkDefaults& defaults);

/// Evolves both endpoint states over the window and returns the distance of
/// the results. Compare against resolved_gamma_max to classify the pair.
double gamma_evolved(const EntangledConnection& connection, const TimeWindow& window);

}  // namespace entac
