#include "entac/network.hpp"

#include <algorithm>
#include <cmath>

#include "entac/errors.hpp"

namespace entac {

EntangledConnection::Key EntangledConnection::key() const {
  if (endpoint_x <= endpoint_y) {
    return {endpoint_x, endpoint_y, level};
  }
  return {endpoint_y, endpoint_x, level};
}

std::size_t ConnectionKeyHash::operator()(const EntangledConnection::Key& k) const {
  std::size_t h = std::hash<std::string>{}(k.a);
  h ^= std::hash<std::string>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<int>{}(k.level) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

NetworkGraph::NetworkGraph(std::vector<NodeId> nodes, std::vector<EntangledConnection> connections,
                           NetworkDefaults defaults)
    : nodes_(std::move(nodes)), connections_(std::move(connections)), defaults_(std::move(defaults)) {
  node_set_.insert(nodes_.begin(), nodes_.end());
  for (std::size_t i = 0; i < connections_.size(); ++i) {
    adjacency_[connections_[i].endpoint_x].push_back(i);
    adjacency_[connections_[i].endpoint_y].push_back(i);
  }
  for (auto& [node, edges] : adjacency_) {
    std::sort(edges.begin(), edges.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = connections_[a];
      const auto& cb = connections_[b];
      const NodeId& opp_a = (ca.endpoint_x == node) ? ca.endpoint_y : ca.endpoint_x;
      const NodeId& opp_b = (cb.endpoint_x == node) ? cb.endpoint_y : cb.endpoint_x;
      if (opp_a != opp_b) {
        return opp_a < opp_b;
      }
      return ca.level < cb.level;
    });
  }
}

std::int64_t hop_distance(const EntangledConnection& connection) {
  return std::int64_t{1} << (connection.level - 1);
}

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check_state(const NodeState& s, const std::string& where, ValidationReport& report) {
  if (!in_unit(s.connection_probability)) {
    report.issues.push_back({"state-range", where + ": connection_probability " +
                                                std::to_string(s.connection_probability) +
                                                " outside [0, 1]"});
  }
  if (!in_unit(s.fidelity)) {
    report.issues.push_back(
        {"state-range", where + ": fidelity " + std::to_string(s.fidelity) + " outside [0, 1]"});
  }
}

std::string edge_name(const EntangledConnection& c) {
  return c.endpoint_x + "-" + c.endpoint_y + " (level " + std::to_string(c.level) + ")";
}

}  // namespace

ValidationReport validate(const NetworkGraph& network) {
  ValidationReport report;

  std::unordered_set<NodeId> seen;
  for (const auto& node : network.nodes()) {
    if (node.empty()) {
      report.issues.push_back({"empty-node-id", "node with empty identifier"});
    }
    if (!seen.insert(node).second) {
      report.issues.push_back({"duplicate-node", "node \"" + node + "\" listed more than once"});
    }
  }

  std::unordered_set<EntangledConnection::Key, ConnectionKeyHash> keys;
  for (const auto& conn : network.connections()) {
    const std::string name = edge_name(conn);
    for (const NodeId* endpoint : {&conn.endpoint_x, &conn.endpoint_y}) {
      if (!seen.count(*endpoint)) {
        report.issues.push_back(
            {"dangling-endpoint", name + ": endpoint \"" + *endpoint + "\" is not a network node"});
      }
    }
    if (conn.endpoint_x == conn.endpoint_y) {
      report.issues.push_back({"self-loop", name + ": endpoints must differ"});
    }
    if (conn.level < 1 || conn.level > 62) {
      report.issues.push_back({"bad-level", name + ": level must lie in [1, 62]"});
    }
    if (!keys.insert(conn.key()).second) {
      report.issues.push_back({"duplicate-connection", name + ": duplicate (x, y, level) triple"});
    }
    check_state(conn.state_at_x, name + " state at " + conn.endpoint_x, report);
    check_state(conn.state_at_y, name + " state at " + conn.endpoint_y, report);
    if (conn.gamma_max && (!std::isfinite(*conn.gamma_max) || *conn.gamma_max < 0.0)) {
      report.issues.push_back({"bad-gamma-max", name + ": gamma_max override must be >= 0"});
    }
  }
  return report;
}

std::vector<std::pair<NodeId, EntangledConnection>> neighbors(const NetworkGraph& network,
                                                              const NodeId& node) {
  std::vector<std::pair<NodeId, EntangledConnection>> out;
  for (std::size_t idx : incident_connections(network, node)) {
    const auto& conn = network.connections()[idx];
    out.emplace_back(conn.endpoint_x == node ? conn.endpoint_y : conn.endpoint_x, conn);
  }
  return out;
}

std::vector<std::size_t> incident_connections(const NetworkGraph& network, const NodeId& node) {
  if (!network.has_node(node)) {
    throw LookupError("unknown node \"" + node + "\"");
  }
  auto it = network.adjacency_.find(node);
  if (it == network.adjacency_.end()) {
    return {};
  }
  return it->second;
}

double resolved_gamma_max(const EntangledConnection& connection, const NetworkDefaults& defaults) {
  return connection.gamma_max.value_or(defaults.gamma_max);
}

double gamma_evolved(const EntangledConnection& connection, const TimeWindow& window) {
  const NodeState sx = evolve_state(connection.state_at_x, connection.profile_x, window).first;
  const NodeState sy = evolve_state(connection.state_at_y, connection.profile_y, window).first;
  return gamma(sx, sy);
}

}  // namespace entac
