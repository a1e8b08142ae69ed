#include <doctest.h>

#include <cmath>
#include <vector>

#include "entac/access.hpp"
#include "entac/errors.hpp"
#include "test_support.hpp"

using namespace entac;
using testsupport::cost_edge;

namespace {

const TimeWindow kWindow{0.0, 1.0};

NetworkGraph graph(std::vector<NodeId> nodes, std::vector<EntangledConnection> connections) {
  return NetworkGraph(std::move(nodes), std::move(connections), NetworkDefaults{});
}

std::vector<NodeId> sequence(const EntangledPath& path) { return node_sequence(path); }

UserDemand demand(const NodeId& source, const NodeId& target, int m_initial, int m_max,
                  double pr_min, double pr_max) {
  UserDemand d;
  d.user = "u";
  d.demand_id = "d";
  d.source = source;
  d.target = target;
  d.priority = PriorityClass{"test", m_initial, m_max};
  d.pr_min = pr_min;
  d.pr_max = pr_max;
  return d;
}

// Per-edge pass mass under the default density and bound: 1 - exp(-2).
const double kEdgePass = -std::expm1(-2.0);

double multi_parallel(int m) { return 1.0 - std::pow(1.0 - kEdgePass, m); }

}  // namespace

TEST_SUITE("access") {

TEST_CASE("cheapest path wins on cost before anything else") {
  const auto net = graph({"A", "B", "C", "D"},
                         {cost_edge("A", "B", 0.001), cost_edge("B", "D", 0.001),
                          cost_edge("A", "C", 0.003), cost_edge("C", "D", 0.003)});
  const auto [set, costs] = find_disjoint_paths(net, "A", "D", 1, kWindow);
  REQUIRE(set.size() == 1);
  CHECK(sequence(set.paths[0]) == std::vector<NodeId>{"A", "B", "D"});
  CHECK(costs[0].value == doctest::Approx(0.002).epsilon(1e-12));
}

TEST_CASE("cost ties break toward fewer edges") {
  const auto net = graph({"A", "B", "D"}, {cost_edge("A", "D", 0.002), cost_edge("A", "B", 0.001),
                                           cost_edge("B", "D", 0.001)});
  const auto [set, costs] = find_disjoint_paths(net, "A", "D", 2, kWindow);
  REQUIRE(set.size() == 2);
  CHECK(sequence(set.paths[0]) == std::vector<NodeId>{"A", "D"});
  CHECK(sequence(set.paths[1]) == std::vector<NodeId>{"A", "B", "D"});
  CHECK(costs[0].value == doctest::Approx(costs[1].value).epsilon(1e-12));
}

TEST_CASE("remaining ties break lexicographically then by level") {
  const auto lexical = graph({"A", "B", "C", "D"},
                             {cost_edge("A", "C", 0.001), cost_edge("C", "D", 0.001),
                              cost_edge("A", "B", 0.001), cost_edge("B", "D", 0.001)});
  const auto [set, costs] = find_disjoint_paths(lexical, "A", "D", 1, kWindow);
  CHECK(sequence(set.paths[0]) == std::vector<NodeId>{"A", "B", "D"});

  const auto leveled = graph({"A", "B"}, {cost_edge("A", "B", 0.001, 2),
                                          cost_edge("A", "B", 0.001, 1)});
  const auto [one, one_costs] = find_disjoint_paths(leveled, "A", "B", 1, kWindow);
  REQUIRE(one.paths[0].edges.size() == 1);
  CHECK(one.paths[0].edges[0].level == 1);
}

TEST_CASE("path count always reaches min(m, supply)") {
  const auto net = graph({"A", "B", "C", "D"},
                         {cost_edge("A", "B", 0.001), cost_edge("B", "D", 0.001),
                          cost_edge("A", "C", 0.003), cost_edge("C", "D", 0.003)});
  CHECK(max_disjoint_supply(net, "A", "D") == 2);
  for (int m = 1; m <= 4; ++m) {
    const auto [set, costs] = find_disjoint_paths(net, "A", "D", m, kWindow);
    CHECK(static_cast<int>(set.size()) == std::min(m, 2));
    CHECK(costs.size() == set.size());
    CHECK(edge_disjoint(set));
  }
}

TEST_CASE("flow fallback recovers paths the greedy order blocks") {
  // The cheapest route S-A-B-T uses the middle rung, leaving no second
  // disjoint route even though two exist. The fallback must deliver both.
  const auto net = graph({"S", "A", "B", "T"},
                         {cost_edge("S", "A", 0.001), cost_edge("A", "B", 0.001),
                          cost_edge("B", "T", 0.001), cost_edge("S", "B", 0.003),
                          cost_edge("A", "T", 0.003)});
  const auto [single, single_costs] = find_disjoint_paths(net, "S", "T", 1, kWindow);
  CHECK(sequence(single.paths[0]) == std::vector<NodeId>{"S", "A", "B", "T"});

  const auto [set, costs] = find_disjoint_paths(net, "S", "T", 2, kWindow);
  REQUIRE(set.size() == 2);
  CHECK(edge_disjoint(set));
  CHECK(sequence(set.paths[0]) == std::vector<NodeId>{"S", "A", "T"});
  CHECK(sequence(set.paths[1]) == std::vector<NodeId>{"S", "B", "T"});
  CHECK(costs[0].value == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(costs[1].value == doctest::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("path search validates its arguments") {
  const auto net = graph({"A", "B"}, {cost_edge("A", "B", 0.001)});
  CHECK_THROWS_AS(find_disjoint_paths(net, "A", "B", 0, kWindow), DomainError);
  CHECK_THROWS_AS(find_disjoint_paths(net, "A", "Z", 1, kWindow), LookupError);
  CHECK_THROWS_AS(find_disjoint_paths(net, "Z", "B", 1, kWindow), LookupError);
  CHECK_THROWS_AS(find_disjoint_paths(net, "A", "A", 1, kWindow), DomainError);
  CHECK_THROWS_AS(max_disjoint_supply(net, "A", "Z"), LookupError);
  CHECK_THROWS_AS(max_disjoint_supply(net, "B", "B"), DomainError);
}

TEST_CASE("supply matches an independent max-flow oracle") {
  // K4 on {A, B, C, D} plus a pendant E-A.
  std::vector<EntangledConnection> edges;
  const std::vector<NodeId> nodes{"A", "B", "C", "D", "E"};
  std::vector<std::pair<int, int>> index_edges;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      edges.push_back(cost_edge(nodes[i], nodes[j], 0.001 * (i + j + 1)));
      index_edges.emplace_back(i, j);
    }
  }
  edges.push_back(cost_edge("E", "A", 0.001));
  index_edges.emplace_back(4, 0);
  const auto net = graph(nodes, edges);
  CHECK(max_disjoint_supply(net, "A", "D") ==
        testsupport::edmonds_karp_undirected(5, index_edges, 0, 3));
  CHECK(max_disjoint_supply(net, "E", "D") ==
        testsupport::edmonds_karp_undirected(5, index_edges, 4, 3));
  CHECK(max_disjoint_supply(net, "E", "D") == 1);
}

TEST_CASE("supply is zero across disconnected components") {
  const auto net = graph({"A", "B", "C", "D"}, {cost_edge("A", "B", 0.001)});
  CHECK(max_disjoint_supply(net, "A", "C") == 0);
  CHECK(max_disjoint_supply(net, "C", "D") == 0);
}

TEST_CASE("evaluate_access composes per-path probabilities") {
  const auto net = graph({"A", "B", "C", "D"},
                         {cost_edge("A", "B", 0.001), cost_edge("B", "D", 0.001),
                          cost_edge("A", "C", 0.003), cost_edge("C", "D", 0.003)});
  const auto [set, costs] = find_disjoint_paths(net, "A", "D", 2, kWindow);
  const double per_path = kEdgePass * kEdgePass;
  const double expected = 1.0 - (1.0 - per_path) * (1.0 - per_path);
  CHECK(evaluate_access(set, net, kWindow) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(evaluate_access(set, net, kWindow) ==
        pathset_probability(set, net.defaults(), kWindow, PathMode::Integrated));
  CHECK(evaluate_access(PathSet{}, net, kWindow) == 0.0);
}

TEST_CASE("adaptation holds inside the band and moves at the boundaries") {
  const auto d = demand("A", "B", 1, 5, 0.4, 0.8);
  CHECK(adapt_m(3, 0.39, d) == 4);
  CHECK(adapt_m(3, 0.4, d) == 3);   // lower boundary is inside the band
  CHECK(adapt_m(3, 0.6, d) == 3);
  CHECK(adapt_m(3, 0.8, d) == 2);   // upper boundary already counts as overshoot
  CHECK(adapt_m(3, 0.95, d) == 2);
  CHECK(adapt_m(1, 0.95, d) == 1);  // never drops below one path
}

TEST_CASE("adaptation validates its inputs") {
  const auto d = demand("A", "B", 1, 5, 0.4, 0.8);
  CHECK_THROWS_AS(adapt_m(0, 0.5, d), DomainError);
  CHECK_THROWS_AS(adapt_m(1, -0.1, d), DomainError);
  CHECK_THROWS_AS(adapt_m(1, 1.1, d), DomainError);
  CHECK_THROWS_AS(adapt_m(1, 0.5, demand("A", "B", 0, 5, 0.4, 0.8)), DomainError);
  CHECK_THROWS_AS(adapt_m(1, 0.5, demand("A", "B", 3, 2, 0.4, 0.8)), DomainError);
  CHECK_THROWS_AS(adapt_m(1, 0.5, demand("A", "B", 1, 5, 0.8, 0.4)), DomainError);
  CHECK_THROWS_AS(adapt_m(1, 0.5, demand("A", "A", 1, 5, 0.4, 0.8)), DomainError);
}

TEST_CASE("access control satisfies a demand inside its band") {
  const auto net = graph({"A", "B"}, {cost_edge("A", "B", 0.001)});
  const auto results = run_access_control(net, {demand("A", "B", 1, 3, 0.8, 0.9)}, kWindow);
  REQUIRE(results.size() == 1);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Satisfied);
  CHECK(r.m_final == 1);
  CHECK(r.paths.size() == 1);
  CHECK(r.note.empty());
  CHECK(r.probability == doctest::Approx(kEdgePass).epsilon(1e-12));
}

TEST_CASE("access control saturates at the priority cap") {
  const auto net = graph({"A", "B"}, {cost_edge("A", "B", 0.001), cost_edge("A", "B", 0.001, 2)});
  const auto results = run_access_control(net, {demand("A", "B", 1, 1, 0.9, 1.0)}, kWindow);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Saturated);
  CHECK(r.m_final == 1);
  CHECK(r.probability == doctest::Approx(kEdgePass).epsilon(1e-12));
}

TEST_CASE("access control saturates at the disjoint supply") {
  const auto net = graph({"A", "B"}, {cost_edge("A", "B", 0.001), cost_edge("A", "B", 0.001, 2)});
  const auto results = run_access_control(net, {demand("A", "B", 1, 5, 0.999, 1.0)}, kWindow);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Saturated);
  CHECK(r.m_final == 2);
  CHECK(r.paths.size() == 2);
  CHECK(r.probability == doctest::Approx(multi_parallel(2)).epsilon(1e-12));
}

TEST_CASE("access control walks m down to one without a note") {
  const auto net = graph({"A", "B"},
                         {cost_edge("A", "B", 0.001), cost_edge("A", "B", 0.001, 2),
                          cost_edge("A", "B", 0.001, 3)});
  const auto results = run_access_control(net, {demand("A", "B", 3, 3, 0.1, 0.5)}, kWindow);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Satisfied);
  CHECK(r.m_final == 1);
  CHECK(r.note.empty());
  CHECK(r.probability == doctest::Approx(kEdgePass).epsilon(1e-12));
}

TEST_CASE("oscillation keeps the larger request and reports it") {
  // p(1) sits below the band, p(2) above it, so the loop would bounce between
  // the two requests forever.
  const auto net = graph({"A", "B"}, {cost_edge("A", "B", 0.001), cost_edge("A", "B", 0.001, 2)});
  REQUIRE(multi_parallel(1) < 0.9);
  REQUIRE(multi_parallel(2) > 0.95);
  const auto results = run_access_control(net, {demand("A", "B", 2, 2, 0.9, 0.95)}, kWindow);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Satisfied);
  CHECK(r.note == "oscillation");
  CHECK(r.m_final == 2);
  CHECK(r.probability == doctest::Approx(multi_parallel(2)).epsilon(1e-12));
}

TEST_CASE("unreachable demands come back infeasible") {
  const auto net = graph({"A", "B", "C", "D"}, {cost_edge("A", "B", 0.001)});
  const auto results = run_access_control(net, {demand("A", "C", 1, 3, 0.5, 0.9)}, kWindow);
  const auto& r = results[0];
  CHECK(r.status == AccessStatus::Infeasible);
  CHECK(r.m_final == 0);
  CHECK(r.paths.empty());
  CHECK(r.probability == 0.0);
}

TEST_CASE("result sizes stay consistent across a mixed batch") {
  const auto net = graph({"A", "B", "C", "D"},
                         {cost_edge("A", "B", 0.001), cost_edge("B", "D", 0.001),
                          cost_edge("A", "C", 0.003), cost_edge("C", "D", 0.003)});
  std::vector<UserDemand> demands{demand("A", "D", 1, 2, 0.5, 0.99),
                                  demand("B", "C", 1, 4, 0.9999, 1.0),
                                  demand("A", "B", 1, 1, 0.1, 0.9999)};
  const auto results = run_access_control(net, demands, kWindow);
  REQUIRE(results.size() == demands.size());
  for (const auto& r : results) {
    if (r.status != AccessStatus::Infeasible) {
      CHECK(static_cast<int>(r.paths.size()) == r.m_final);
      CHECK(r.path_costs.size() == r.paths.size());
      CHECK(edge_disjoint(r.paths));
    }
  }
}

TEST_CASE("status names render for reports") {
  CHECK(to_string(AccessStatus::Satisfied) == "satisfied");
  CHECK(to_string(AccessStatus::Saturated) == "saturated");
  CHECK(to_string(AccessStatus::Infeasible) == "infeasible");
}

}  // TEST_SUITE
