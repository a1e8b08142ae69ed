#include "entac/access.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <utility>

#include "entac/errors.hpp"

namespace entac {
namespace {

// Indexed view of the network used by all routing routines. Node ranks are
// assigned in lexicographic id order, so rank comparison equals id comparison.
struct RoutingView {
  std::vector<NodeId> rank_to_id;
  std::unordered_map<NodeId, int> id_to_rank;
  // One entry per connection, endpoints as ranks, cost over the query window.
  struct Link {
    int x = 0;
    int y = 0;
    int level = 1;
    double cost = 0.0;
  };
  std::vector<Link> links;
  // adjacency[u] holds (neighbor rank, level, connection index), sorted.
  std::vector<std::vector<std::array<int, 3>>> adjacency;
};

RoutingView make_view(const NetworkGraph& network, const TimeWindow& window) {
  RoutingView view;
  view.rank_to_id = network.nodes();
  std::sort(view.rank_to_id.begin(), view.rank_to_id.end());
  for (std::size_t i = 0; i < view.rank_to_id.size(); ++i) {
    view.id_to_rank.emplace(view.rank_to_id[i], static_cast<int>(i));
  }
  view.links.reserve(network.connections().size());
  view.adjacency.assign(view.rank_to_id.size(), {});
  for (std::size_t i = 0; i < network.connections().size(); ++i) {
    const EntangledConnection& conn = network.connections()[i];
    RoutingView::Link link;
    link.x = view.id_to_rank.at(conn.endpoint_x);
    link.y = view.id_to_rank.at(conn.endpoint_y);
    link.level = conn.level;
    link.cost = connection_cost(conn, window).value;
    view.links.push_back(link);
    view.adjacency[link.x].push_back({link.y, link.level, static_cast<int>(i)});
    view.adjacency[link.y].push_back({link.x, link.level, static_cast<int>(i)});
  }
  for (auto& list : view.adjacency) std::sort(list.begin(), list.end());
  return view;
}

// Search label: full path state so exact tie-breaking is possible.
struct PathLabel {
  double cost = 0.0;
  std::vector<int> nodes;   // ranks, source first
  std::vector<int> levels;  // one per traversed connection
  std::vector<int> conns;   // connection indices in traversal order
};

// Orders by (cost, hop count, node sequence, level sequence).
bool label_less(const PathLabel& a, const PathLabel& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.conns.size() != b.conns.size()) return a.conns.size() < b.conns.size();
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.levels < b.levels;
}

// Cheapest simple path between two ranks, skipping removed connections.
// Ties resolved by label_less so the result is unique and deterministic.
std::optional<PathLabel> cheapest_path(const RoutingView& view, int source, int target,
                                       const std::vector<char>& removed) {
  const int n = static_cast<int>(view.rank_to_id.size());
  std::vector<std::optional<PathLabel>> best(n);
  std::vector<char> settled(n, 0);

  auto heap_cmp = [](const PathLabel& a, const PathLabel& b) { return label_less(b, a); };
  std::priority_queue<PathLabel, std::vector<PathLabel>, decltype(heap_cmp)> heap(heap_cmp);

  PathLabel start;
  start.nodes.push_back(source);
  best[source] = start;
  heap.push(start);

  while (!heap.empty()) {
    PathLabel label = heap.top();
    heap.pop();
    const int u = label.nodes.back();
    if (settled[u]) continue;
    if (best[u] && label_less(*best[u], label)) continue;
    settled[u] = 1;
    if (u == target) return label;
    for (const auto& [v, level, conn] : view.adjacency[u]) {
      if (removed[conn] || settled[v]) continue;
      PathLabel next = label;
      next.cost += view.links[conn].cost;
      next.nodes.push_back(v);
      next.levels.push_back(level);
      next.conns.push_back(conn);
      if (!best[v] || label_less(next, *best[v])) {
        best[v] = next;
        heap.push(std::move(next));
      }
    }
  }
  return std::nullopt;
}

EntangledPath materialize(const NetworkGraph& network, const RoutingView& view,
                          const PathLabel& label) {
  EntangledPath path;
  path.source = view.rank_to_id[label.nodes.front()];
  path.target = view.rank_to_id[label.nodes.back()];
  path.edges.reserve(label.conns.size());
  for (int conn : label.conns) path.edges.push_back(network.connections()[conn]);
  return path;
}

// Unit-capacity arc list: each connection contributes a forward arc per
// direction plus its residual. arcs[a ^ 1] is the residual of arcs[a].
struct FlowArcs {
  struct Arc {
    int to = 0;
    int cap = 0;
    double cost = 0.0;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;  // arc indices per node

  void add(int from, int to, double cost, int cap) {
    out[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap, cost});
    out[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0, -cost});
  }
};

// Blocked connections keep their arc slots (decomposition indexes arcs by
// connection) but carry zero capacity in both directions.
FlowArcs make_flow_arcs(const RoutingView& view, const std::vector<char>* blocked = nullptr) {
  FlowArcs flow;
  flow.out.assign(view.rank_to_id.size(), {});
  for (std::size_t c = 0; c < view.links.size(); ++c) {
    const auto& link = view.links[c];
    const int cap = (blocked != nullptr && (*blocked)[c]) ? 0 : 1;
    flow.add(link.x, link.y, link.cost, cap);
    flow.add(link.y, link.x, link.cost, cap);
  }
  return flow;
}

// Dinic max flow on unit arcs; value equals the edge-disjoint path supply.
int unit_max_flow(FlowArcs& flow, int source, int target) {
  const int n = static_cast<int>(flow.out.size());
  std::vector<int> dist(n);
  std::vector<std::size_t> next_arc(n);

  auto bfs = [&]() {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<int> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int a : flow.out[u]) {
        const auto& arc = flow.arcs[a];
        if (arc.cap > 0 && dist[arc.to] < 0) {
          dist[arc.to] = dist[u] + 1;
          queue.push_back(arc.to);
        }
      }
    }
    return dist[target] >= 0;
  };

  std::function<int(int)> dfs = [&](int u) -> int {
    if (u == target) return 1;
    for (std::size_t& i = next_arc[u]; i < flow.out[u].size(); ++i) {
      int a = flow.out[u][i];
      auto& arc = flow.arcs[a];
      if (arc.cap > 0 && dist[arc.to] == dist[u] + 1 && dfs(arc.to)) {
        arc.cap -= 1;
        flow.arcs[a ^ 1].cap += 1;
        return 1;
      }
    }
    return 0;
  };

  int value = 0;
  while (bfs()) {
    std::fill(next_arc.begin(), next_arc.end(), 0);
    while (dfs(source)) ++value;
  }
  return value;
}

// Successive shortest paths: augments `amount` units one at a time along the
// cheapest residual path (Bellman-Ford; residual costs can be negative).
// Returns false if the residual network runs out of augmenting paths early.
bool min_cost_flow(FlowArcs& flow, int source, int target, int amount) {
  const int n = static_cast<int>(flow.out.size());
  for (int round = 0; round < amount; ++round) {
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> via(n, -1);
    dist[source] = 0.0;
    for (int pass = 0; pass < n; ++pass) {
      bool changed = false;
      for (int u = 0; u < n; ++u) {
        if (!std::isfinite(dist[u])) continue;
        for (int a : flow.out[u]) {
          const auto& arc = flow.arcs[a];
          if (arc.cap <= 0) continue;
          double cand = dist[u] + arc.cost;
          if (cand < dist[arc.to] - 1e-15) {
            dist[arc.to] = cand;
            via[arc.to] = a;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!std::isfinite(dist[target])) return false;
    for (int v = target; v != source;) {
      int a = via[v];
      flow.arcs[a].cap -= 1;
      flow.arcs[a ^ 1].cap += 1;
      v = flow.arcs[a ^ 1].to;
    }
  }
  return true;
}

// Reads the flow off the arc list and decomposes it into simple paths.
// Antiparallel use of one connection cancels; zero-cost loops are excised.
std::vector<PathLabel> decompose_flow(const RoutingView& view, const FlowArcs& flow, int source,
                                      int target, int amount) {
  const int conn_count = static_cast<int>(view.links.size());
  // used[conn] in {-1, 0, +1}: direction of surviving flow (+1 is x->y).
  std::vector<int> used(conn_count, 0);
  for (int c = 0; c < conn_count; ++c) {
    // An arc carried flow iff its residual gained the unit (distinguishes
    // spent arcs from connections that entered with zero capacity).
    const bool fwd = flow.arcs[4 * c + 1].cap == 1;  // x->y spent
    const bool rev = flow.arcs[4 * c + 3].cap == 1;  // y->x spent
    if (fwd == rev) continue;  // unused, or antiparallel pair cancels out
    used[c] = fwd ? 1 : -1;
  }

  // out_conns[u]: connections leaving u under the surviving flow, sorted so
  // the walk below is deterministic.
  std::vector<std::vector<std::array<int, 3>>> out_conns(view.rank_to_id.size());
  for (int c = 0; c < conn_count; ++c) {
    if (used[c] == 0) continue;
    int from = used[c] > 0 ? view.links[c].x : view.links[c].y;
    int to = used[c] > 0 ? view.links[c].y : view.links[c].x;
    out_conns[from].push_back({to, view.links[c].level, c});
  }
  for (auto& list : out_conns) std::sort(list.begin(), list.end());

  std::vector<char> consumed(conn_count, 0);
  std::vector<PathLabel> paths;
  for (int k = 0; k < amount; ++k) {
    PathLabel label;
    label.nodes.push_back(source);
    std::vector<int> position(view.rank_to_id.size(), -1);
    position[source] = 0;
    int u = source;
    while (u != target) {
      const auto& list = out_conns[u];
      std::size_t pick = list.size();
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!consumed[list[i][2]]) {
          pick = i;
          break;
        }
      }
      if (pick == list.size()) {
        throw ContractError("flow decomposition stalled; conservation violated");
      }
      const auto& [v, level, conn] = list[pick];
      consumed[conn] = 1;
      if (position[v] >= 0) {
        // Loop back to an earlier node: drop the loop, keep its arcs consumed.
        const int keep = position[v];
        for (std::size_t i = keep + 1; i < label.nodes.size(); ++i) position[label.nodes[i]] = -1;
        label.nodes.resize(keep + 1);
        label.levels.resize(keep);
        label.conns.resize(keep);
      } else {
        position[v] = static_cast<int>(label.nodes.size());
        label.nodes.push_back(v);
        label.levels.push_back(level);
        label.conns.push_back(conn);
      }
      u = v;
    }
    for (int conn : label.conns) label.cost += view.links[conn].cost;
    paths.push_back(std::move(label));
  }
  std::sort(paths.begin(), paths.end(), label_less);
  return paths;
}

void check_demand(const UserDemand& demand) {
  if (demand.priority.m_initial < 1 || demand.priority.m_initial > demand.priority.m_max) {
    throw DomainError("priority class requires 1 <= m_initial <= m_max");
  }
  if (!(demand.pr_min >= 0.0) || !(demand.pr_min < demand.pr_max) || !(demand.pr_max <= 1.0)) {
    throw DomainError("demand requires 0 <= pr_min < pr_max <= 1");
  }
  if (demand.source == demand.target) {
    throw DomainError("demand endpoints must differ");
  }
}

}  // namespace

std::string to_string(AccessStatus status) {
  switch (status) {
    case AccessStatus::Satisfied: return "satisfied";
    case AccessStatus::Saturated: return "saturated";
    case AccessStatus::Infeasible: return "infeasible";
  }
  throw ContractError("unhandled access status");
}

std::pair<PathSet, std::vector<Cost>> find_disjoint_paths(const NetworkGraph& network,
                                                          const NodeId& source,
                                                          const NodeId& target, int m,
                                                          const TimeWindow& window) {
  if (m < 1) throw DomainError("requested path count must be at least 1");
  if (!network.has_node(source)) throw LookupError("unknown node: " + source);
  if (!network.has_node(target)) throw LookupError("unknown node: " + target);
  if (source == target) throw DomainError("path endpoints must differ");

  const RoutingView view = make_view(network, window);
  const int s = view.id_to_rank.at(source);
  const int t = view.id_to_rank.at(target);

  std::vector<PathLabel> labels;
  std::vector<char> removed(view.links.size(), 0);
  while (static_cast<int>(labels.size()) < m) {
    auto label = cheapest_path(view, s, t, removed);
    if (!label) break;
    for (int conn : label->conns) removed[conn] = 1;
    labels.push_back(std::move(*label));
  }

  // Greedy removal can block paths a flow would find. When that happens,
  // keep the longest greedy prefix a flow can still complete to the full
  // supply, so the count invariant holds and the cheapest path survives
  // whenever any full-size disjoint family contains it.
  if (static_cast<int>(labels.size()) < m) {
    FlowArcs probe = make_flow_arcs(view);
    const int supply = unit_max_flow(probe, s, t);
    const int want = std::min(m, supply);
    if (static_cast<int>(labels.size()) < want) {
      for (int keep = static_cast<int>(labels.size()); keep >= 0; --keep) {
        std::vector<char> blocked(view.links.size(), 0);
        for (int i = 0; i < keep; ++i) {
          for (int conn : labels[i].conns) blocked[conn] = 1;
        }
        const int need = want - keep;
        FlowArcs residual_probe = make_flow_arcs(view, &blocked);
        if (unit_max_flow(residual_probe, s, t) < need) continue;
        FlowArcs flow = make_flow_arcs(view, &blocked);
        if (!min_cost_flow(flow, s, t, need)) {
          throw ContractError("min-cost flow under-delivered against max-flow supply");
        }
        labels.resize(keep);
        for (auto& label : decompose_flow(view, flow, s, t, need)) {
          labels.push_back(std::move(label));
        }
        break;
      }
      if (static_cast<int>(labels.size()) != want) {
        throw ContractError("disjoint-path extraction missed the max-flow supply");
      }
    }
  }

  PathSet set;
  std::vector<Cost> costs;
  for (const auto& label : labels) {
    set.paths.push_back(materialize(network, view, label));
    costs.push_back(Cost{label.cost});
  }
  return {std::move(set), std::move(costs)};
}

double evaluate_access(const PathSet& paths, const NetworkGraph& network,
                       const TimeWindow& window) {
  return pathset_probability(paths, network.defaults(), window, PathMode::Integrated);
}

int adapt_m(int current_m, double probability, const UserDemand& demand) {
  if (current_m < 1) throw DomainError("current path count must be at least 1");
  if (!(probability >= 0.0) || !(probability <= 1.0)) {
    throw DomainError("probability must lie in [0, 1]");
  }
  check_demand(demand);
  if (probability < demand.pr_min) return current_m + 1;
  if (probability >= demand.pr_max) return std::max(current_m - 1, 1);
  return current_m;
}

int max_disjoint_supply(const NetworkGraph& network, const NodeId& source, const NodeId& target) {
  if (!network.has_node(source)) throw LookupError("unknown node: " + source);
  if (!network.has_node(target)) throw LookupError("unknown node: " + target);
  if (source == target) throw DomainError("supply endpoints must differ");
  const RoutingView view = make_view(network, TimeWindow{});
  FlowArcs flow = make_flow_arcs(view);
  return unit_max_flow(flow, view.id_to_rank.at(source), view.id_to_rank.at(target));
}

std::vector<AccessResult> run_access_control(const NetworkGraph& network,
                                             const std::vector<UserDemand>& demands,
                                             const TimeWindow& window) {
  std::vector<AccessResult> results;
  results.reserve(demands.size());
  for (const UserDemand& demand : demands) {
    check_demand(demand);
    AccessResult result;
    result.user = demand.user;
    result.demand_id = demand.demand_id;

    const int supply = max_disjoint_supply(network, demand.source, demand.target);
    if (supply == 0) {
      result.status = AccessStatus::Infeasible;
      results.push_back(std::move(result));
      continue;
    }

    int m = demand.priority.m_initial;
    std::map<int, double> visited;  // requested m -> achieved probability
    PathSet paths;
    std::vector<Cost> costs;
    double probability = 0.0;
    while (true) {
      std::tie(paths, costs) = find_disjoint_paths(network, demand.source, demand.target, m, window);
      probability = evaluate_access(paths, network, window);
      visited.emplace(m, probability);

      const int next = adapt_m(m, probability, demand);
      if (next == m) {
        result.status = AccessStatus::Satisfied;
        break;
      }
      if (next > m && (next > demand.priority.m_max || next > supply)) {
        result.status = AccessStatus::Saturated;
        break;
      }
      if (visited.count(next) > 0) {
        // The loop would revisit a state and cycle forever. Keep the larger
        // request of the pair, which can only overshoot the band, never
        // undershoot it.
        if (next > m) {
          m = next;
          std::tie(paths, costs) =
              find_disjoint_paths(network, demand.source, demand.target, m, window);
          probability = evaluate_access(paths, network, window);
        }
        result.status = AccessStatus::Satisfied;
        result.note = "oscillation";
        break;
      }
      m = next;
    }

    result.paths = std::move(paths);
    result.path_costs = std::move(costs);
    result.probability = probability;
    result.m_final = static_cast<int>(result.paths.size());
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace entac
