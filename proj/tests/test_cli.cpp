#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "entac/csv.hpp"
#include "entac/density.hpp"
#include "test_support.hpp"

using entac::CsvTable;
using entac::DensityModel;
using testsupport::parse_csv;
using testsupport::read_file;
using testsupport::run_cli;
using testsupport::scenario_path;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Per-edge pass mass of the two-route scenario: cdf(exp(200), 0.02).
double edge_pass() { return cdf(DensityModel::exponential(200.0), 0.02); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate reports the scenario inventory") {
  const auto result = run_cli("validate --scenario " + scenario_path("diamond.json"));
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("ok:") != std::string::npos);
  CHECK(result.out.find("4 nodes, 4 connections, 1 demands") != std::string::npos);
}

TEST_CASE("validate lists every violation and fails with exit 1") {
  write_text("tmp_bad_scenario.json", R"({
    "nodes": ["A", "B"],
    "connections": [],
    "defaults": {"gamma_max": -1, "f_crit": 0.98, "f_delta_max": 0.02,
                 "density": {"kind": "exponential", "lambda": 100.0}},
    "demands": [],
    "window": {"t0": 0, "dt": 1},
    "oops": true
  })");
  const auto result = run_cli("validate --scenario tmp_bad_scenario.json");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("violation: $: unknown key \"oops\"") != std::string::npos);
  CHECK(result.err.find("violation: $.defaults.gamma_max: must be >= 0") != std::string::npos);
  std::remove("tmp_bad_scenario.json");
}

TEST_CASE("syntax and io failures exit 1 with a message") {
  write_text("tmp_broken.json", "{\"nodes\": [");
  const auto broken = run_cli("validate --scenario tmp_broken.json");
  CHECK(broken.exit_code == 1);
  CHECK(broken.err.find("parse error at line") != std::string::npos);
  std::remove("tmp_broken.json");

  const auto missing = run_cli("validate --scenario does_not_exist.json");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("usage problems exit 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("validate").exit_code == 2);
  CHECK(run_cli("route --scenario x.json --bogus").exit_code == 2);
  const std::string diamond = scenario_path("diamond.json");
  CHECK(run_cli("probability --scenario " + diamond + " --m 0").exit_code == 2);
  CHECK(run_cli("probability --scenario " + diamond + " --m 3..2").exit_code == 2);
  CHECK(run_cli("probability --scenario " + diamond + " --m x").exit_code == 2);
  CHECK(run_cli("probability --scenario " + diamond + " --mode weird").exit_code == 2);
  CHECK(run_cli("evolve --scenario " + diamond + " --steps 0").exit_code == 2);
}

TEST_CASE("help is exit 0 and lists the subcommands") {
  const auto result = run_cli("--help");
  CHECK(result.exit_code == 0);
  for (const char* name : {"probability", "route", "evolve", "montecarlo", "validate"}) {
    CHECK(result.out.find(name) != std::string::npos);
  }
}

TEST_CASE("probability tabulates single and multipath values per m") {
  const auto result = run_cli("probability --scenario " + scenario_path("diamond.json") +
                              " --m 1..3 --out tmp_prob.csv");
  REQUIRE(result.exit_code == 0);
  const auto rows = parse_csv(read_file("tmp_prob.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"user", "demand", "m", "paths_found",
                                            "single_path_probability", "multipath_probability"});
  const double c = edge_pass();
  const double single = c * c;
  CHECK(rows[1] == std::vector<std::string>{"u1", "d1", "1", "1", CsvTable::cell(single),
                                            CsvTable::cell(single)});
  const double multi2 = 1.0 - (1.0 - single) * (1.0 - single);
  CHECK(rows[2] == std::vector<std::string>{"u1", "d1", "2", "2", CsvTable::cell(single),
                                            CsvTable::cell(multi2)});
  // Supply is exhausted at two paths, so m = 3 repeats the m = 2 value.
  CHECK(rows[3][3] == "2");
  CHECK(rows[3][5] == CsvTable::cell(multi2));
  std::remove("tmp_prob.csv");
}

TEST_CASE("fidelity mode is accepted") {
  const auto result = run_cli("probability --scenario " + scenario_path("diamond.json") +
                              " --m 1 --mode fidelity --out tmp_prob_fid.csv");
  CHECK(result.exit_code == 0);
  std::remove("tmp_prob_fid.csv");
}

TEST_CASE("route emits one row per path with the pinned columns") {
  const auto result =
      run_cli("route --scenario " + scenario_path("diamond.json") + " --out tmp_route.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("u1/d1: satisfied, m_final=2") != std::string::npos);
  const auto rows = parse_csv(read_file("tmp_route.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"user", "demand", "m_final", "status", "probability",
                                            "path_index", "path_cost", "node_sequence"});
  const double single = edge_pass() * edge_pass();
  const double multi2 = 1.0 - (1.0 - single) * (1.0 - single);
  CHECK(rows[1] == std::vector<std::string>{"u1", "d1", "2", "satisfied",
                                            CsvTable::cell(multi2), "0", "0.002", "A->R1->B"});
  CHECK(rows[2] == std::vector<std::string>{"u1", "d1", "2", "satisfied",
                                            CsvTable::cell(multi2), "1", "0.004", "A->R2->B"});
  std::remove("tmp_route.csv");
}

TEST_CASE("route output is byte-identical across runs") {
  const std::string cmd = "route --scenario " + scenario_path("diamond.json") + " --out ";
  REQUIRE(run_cli(cmd + "tmp_route_a.csv").exit_code == 0);
  REQUIRE(run_cli(cmd + "tmp_route_b.csv").exit_code == 0);
  CHECK(read_file("tmp_route_a.csv") == read_file("tmp_route_b.csv"));
  std::remove("tmp_route_a.csv");
  std::remove("tmp_route_b.csv");
}

TEST_CASE("an unsatisfiable demand produces a placeholder row") {
  write_text("tmp_island.json", R"({
    "nodes": ["A", "B", "C"],
    "connections": [
      {"x": "A", "y": "B", "level": 1,
       "state_x": {"prob": 0.9, "fidelity": 0.99},
       "state_y": {"prob": 0.9, "fidelity": 0.99},
       "profile_x": {"prob": {"kind": "constant", "value": 0.0},
                     "fidelity": {"kind": "constant", "value": 0.0}},
       "profile_y": {"prob": {"kind": "constant", "value": 0.0},
                     "fidelity": {"kind": "constant", "value": 0.0}}}
    ],
    "defaults": {"gamma_max": 0.02, "f_crit": 0.98, "f_delta_max": 0.02,
                 "density": {"kind": "exponential", "lambda": 100.0}},
    "demands": [
      {"user": "bob", "id": "d9", "source": "A", "target": "C",
       "priority": {"name": "standard", "m_initial": 1, "m_max": 2},
       "pr_min": 0.5, "pr_max": 0.9}
    ],
    "window": {"t0": 0, "dt": 1}
  })");
  const auto result = run_cli("route --scenario tmp_island.json --out tmp_island.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("bob/d9: infeasible, no path") != std::string::npos);
  const auto rows = parse_csv(read_file("tmp_island.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"bob", "d9", "0", "infeasible", "0", "-1", "0", ""});
  std::remove("tmp_island.json");
  std::remove("tmp_island.csv");
}

TEST_CASE("evolve tabulates states step by step") {
  const auto result = run_cli("evolve --scenario " + scenario_path("diamond.json") +
                              " --steps 4 --out tmp_evolve.csv");
  REQUIRE(result.exit_code == 0);
  const auto rows = parse_csv(read_file("tmp_evolve.csv"));
  REQUIRE(rows.size() == 1 + 4 * 5);  // header + 4 connections x 5 steps
  CHECK(rows[0] == std::vector<std::string>{"connection", "x", "y", "level", "step", "time",
                                            "prob_x", "fid_x", "prob_y", "fid_y", "gamma",
                                            "clamp_prob_x", "clamp_fid_x", "clamp_prob_y",
                                            "clamp_fid_y"});
  // First connection, first and last step.
  CHECK(rows[1][4] == "0");
  CHECK(rows[1][10] == "0");  // both endpoints start at the same state
  CHECK(rows[5][4] == "4");
  CHECK(rows[5][5] == "1");
  CHECK(rows[5][6] == CsvTable::cell(0.951));  // 0.95 + 0.001 * 1.0
  CHECK(rows[5][10] == CsvTable::cell(0.001));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][11] == "0");
    CHECK(rows[i][14] == "0");
  }
  std::remove("tmp_evolve.csv");
}

TEST_CASE("montecarlo output is reproducible for a fixed seed") {
  const std::string base = "montecarlo --scenario " + scenario_path("diamond.json") +
                           " --trials 20000 --seed 42 --out ";
  const auto first = run_cli(base + "tmp_mc_a.csv");
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.find("20000 trials, seed 42") != std::string::npos);
  REQUIRE(run_cli(base + "tmp_mc_b.csv").exit_code == 0);
  const std::string a = read_file("tmp_mc_a.csv");
  CHECK(a == read_file("tmp_mc_b.csv"));

  const auto rows = parse_csv(a);
  REQUIRE(rows.size() == 4);  // header, two single rows, one multi row
  CHECK(rows[0] == std::vector<std::string>{"user", "demand", "kind", "path_index", "g",
                                            "analytic", "empirical", "std_error", "abs_error",
                                            "within_3se"});
  CHECK(rows[1][2] == "single");
  CHECK(rows[3][2] == "multi");
  CHECK(rows[3][4] == "2");

  REQUIRE(run_cli("montecarlo --scenario " + scenario_path("diamond.json") +
                  " --trials 20000 --seed 43 --out tmp_mc_c.csv")
              .exit_code == 0);
  CHECK(a != read_file("tmp_mc_c.csv"));
  std::remove("tmp_mc_a.csv");
  std::remove("tmp_mc_b.csv");
  std::remove("tmp_mc_c.csv");
}

TEST_CASE("seed resolution prefers the flag over the environment") {
  const std::string diamond = scenario_path("diamond.json");
  const std::string tail = " --trials 5000 --out ";
  REQUIRE(run_cli("montecarlo --scenario " + diamond + tail + "tmp_seed_flag.csv --seed 99")
              .exit_code == 0);
  REQUIRE(run_cli("montecarlo --scenario " + diamond + tail + "tmp_seed_both.csv --seed 99",
                  "ENTAC_SEED=777 ")
              .exit_code == 0);
  CHECK(read_file("tmp_seed_flag.csv") == read_file("tmp_seed_both.csv"));

  REQUIRE(run_cli("montecarlo --scenario " + diamond + tail + "tmp_seed_env.csv",
                  "ENTAC_SEED=777 ")
              .exit_code == 0);
  REQUIRE(run_cli("montecarlo --scenario " + diamond + tail + "tmp_seed_env2.csv",
                  "ENTAC_SEED=777 ")
              .exit_code == 0);
  CHECK(read_file("tmp_seed_env.csv") == read_file("tmp_seed_env2.csv"));
  CHECK(read_file("tmp_seed_env.csv") != read_file("tmp_seed_flag.csv"));

  const auto garbage = run_cli("montecarlo --scenario " + diamond + tail + "tmp_seed_bad.csv",
                               "ENTAC_SEED=banana ");
  CHECK(garbage.exit_code == 2);
  CHECK(garbage.err.find("ENTAC_SEED") != std::string::npos);
  for (const char* f : {"tmp_seed_flag.csv", "tmp_seed_both.csv", "tmp_seed_env.csv",
                        "tmp_seed_env2.csv", "tmp_seed_bad.csv"}) {
    std::remove(f);
  }
}

TEST_CASE("default output names are used when --out is omitted") {
  std::remove("route.csv");
  REQUIRE(run_cli("route --scenario " + scenario_path("diamond.json")).exit_code == 0);
  CHECK(!read_file("route.csv").empty());
  std::remove("route.csv");
}

}  // TEST_SUITE
