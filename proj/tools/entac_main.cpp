#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entac/access.hpp"
#include "entac/csv.hpp"
#include "entac/errors.hpp"
#include "entac/monte_carlo.hpp"
#include "entac/path_stats.hpp"
#include "entac/scenario.hpp"

namespace {

using namespace entac;

// Thrown for post-parse argument problems so main can map them to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MRange {
  int lo = 1;
  int hi = 1;
};

// Accepts "3" or "1..5".
MRange parse_m_spec(const std::string& spec) {
  const auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--m expects an integer or A..B range, got \"" + spec + "\"");
    }
    if (used != s.size()) {
      throw UsageError("--m expects an integer or A..B range, got \"" + spec + "\"");
    }
    return value;
  };
  MRange range;
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    range.lo = range.hi = parse_int(spec);
  } else {
    range.lo = parse_int(spec.substr(0, dots));
    range.hi = parse_int(spec.substr(dots + 2));
  }
  if (range.lo < 1 || range.hi < range.lo) {
    throw UsageError("--m range must satisfy 1 <= lo <= hi");
  }
  return range;
}

PathMode parse_mode(const std::string& mode) {
  if (mode == "integrated") return PathMode::Integrated;
  if (mode == "fidelity") return PathMode::FidelityOnly;
  throw UsageError("--mode must be \"integrated\" or \"fidelity\"");
}

std::string join_nodes(const EntangledPath& path) {
  std::string out;
  for (const NodeId& node : node_sequence(path)) {
    if (!out.empty()) out += "->";
    out += node;
  }
  return out;
}

int run_probability(const std::string& scenario_path, const std::string& m_spec,
                    const std::string& mode_name, const std::string& out_path) {
  const Scenario scenario = load_scenario(scenario_path);
  const MRange range = parse_m_spec(m_spec);
  const PathMode mode = parse_mode(mode_name);

  CsvTable csv({"user", "demand", "m", "paths_found", "single_path_probability",
                "multipath_probability"});
  std::cout << std::left << std::setw(10) << "user" << std::setw(10) << "demand" << std::setw(4)
            << "m" << std::setw(7) << "found" << std::setw(14) << "single" << "multipath\n";
  for (const UserDemand& demand : scenario.demands) {
    for (int m = range.lo; m <= range.hi; ++m) {
      const auto [paths, costs] =
          find_disjoint_paths(scenario.network, demand.source, demand.target, m, scenario.window);
      const double multi =
          pathset_probability(paths, scenario.network.defaults(), scenario.window, mode);
      const double single =
          paths.empty() ? 0.0
                        : path_probability(paths.paths.front(), scenario.network.defaults(),
                                           scenario.window, mode);
      csv.add_row({demand.user, demand.demand_id, CsvTable::cell(m),
                   CsvTable::cell(static_cast<int>(paths.size())), CsvTable::cell(single),
                   CsvTable::cell(multi)});
      std::cout << std::left << std::setw(10) << demand.user << std::setw(10) << demand.demand_id
                << std::setw(4) << m << std::setw(7) << paths.size() << std::setw(14)
                << CsvTable::cell(single) << CsvTable::cell(multi) << "\n";
    }
  }
  csv.write(out_path);
  return 0;
}

int run_route(const std::string& scenario_path, const std::string& out_path) {
  const Scenario scenario = load_scenario(scenario_path);
  const std::vector<AccessResult> results =
      run_access_control(scenario.network, scenario.demands, scenario.window);

  CsvTable csv({"user", "demand", "m_final", "status", "probability", "path_index", "path_cost",
                "node_sequence"});
  for (const AccessResult& result : results) {
    if (result.paths.empty()) {
      csv.add_row({result.user, result.demand_id, CsvTable::cell(result.m_final),
                   to_string(result.status), CsvTable::cell(result.probability),
                   CsvTable::cell(-1), CsvTable::cell(0.0), ""});
      continue;
    }
    for (std::size_t i = 0; i < result.paths.size(); ++i) {
      csv.add_row({result.user, result.demand_id, CsvTable::cell(result.m_final),
                   to_string(result.status), CsvTable::cell(result.probability),
                   CsvTable::cell(static_cast<int>(i)), CsvTable::cell(result.path_costs[i].value),
                   join_nodes(result.paths.paths[i])});
    }
    std::cout << result.user << "/" << result.demand_id << ": " << to_string(result.status)
              << ", m_final=" << result.m_final
              << ", probability=" << CsvTable::cell(result.probability)
              << (result.note.empty() ? "" : " (" + result.note + ")") << "\n";
  }
  for (const AccessResult& result : results) {
    if (result.paths.empty()) {
      std::cout << result.user << "/" << result.demand_id << ": " << to_string(result.status)
                << ", no path\n";
    }
  }
  csv.write(out_path);
  return 0;
}

int run_evolve(const std::string& scenario_path, int steps, const std::string& out_path) {
  if (steps < 1) throw UsageError("--steps must be >= 1");
  const Scenario scenario = load_scenario(scenario_path);

  CsvTable csv({"connection", "x", "y", "level", "step", "time", "prob_x", "fid_x", "prob_y",
                "fid_y", "gamma", "clamp_prob_x", "clamp_fid_x", "clamp_prob_y", "clamp_fid_y"});
  const auto& connections = scenario.network.connections();
  for (std::size_t c = 0; c < connections.size(); ++c) {
    const EntangledConnection& conn = connections[c];
    for (int k = 0; k <= steps; ++k) {
      const double dt = scenario.window.dt * static_cast<double>(k) / steps;
      const TimeWindow sub{scenario.window.t0, dt};
      const auto [sx, clamp_x] = evolve_state(conn.state_at_x, conn.profile_x, sub);
      const auto [sy, clamp_y] = evolve_state(conn.state_at_y, conn.profile_y, sub);
      csv.add_row({CsvTable::cell(static_cast<int>(c)), conn.endpoint_x, conn.endpoint_y,
                   CsvTable::cell(conn.level), CsvTable::cell(k),
                   CsvTable::cell(scenario.window.t0 + dt),
                   CsvTable::cell(sx.connection_probability), CsvTable::cell(sx.fidelity),
                   CsvTable::cell(sy.connection_probability), CsvTable::cell(sy.fidelity),
                   CsvTable::cell(gamma(sx, sy)), CsvTable::cell(clamp_x.probability_clamped),
                   CsvTable::cell(clamp_x.fidelity_clamped),
                   CsvTable::cell(clamp_y.probability_clamped),
                   CsvTable::cell(clamp_y.fidelity_clamped)});
    }
  }
  csv.write(out_path);
  std::cout << "evolved " << connections.size() << " connections over " << steps << " steps\n";
  return 0;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           const Scenario& scenario) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("ENTAC_SEED")) {
    const std::string text(env);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(text, &used);
    } catch (const std::exception&) {
      throw UsageError("ENTAC_SEED must be a nonnegative integer, got \"" + text + "\"");
    }
    if (used != text.size()) {
      throw UsageError("ENTAC_SEED must be a nonnegative integer, got \"" + text + "\"");
    }
    return value;
  }
  if (scenario.monte_carlo) return scenario.monte_carlo->seed;
  return 0;
}

int run_montecarlo(const std::string& scenario_path, std::optional<std::uint64_t> trials_flag,
                   std::optional<std::uint64_t> seed_flag, const std::string& out_path) {
  const Scenario scenario = load_scenario(scenario_path);

  TrialConfig config;
  config.trials = trials_flag.value_or(
      scenario.monte_carlo ? scenario.monte_carlo->trials : std::uint64_t{100000});
  if (config.trials < 1) throw UsageError("--trials must be >= 1");
  config.seed = resolve_seed(seed_flag, scenario);

  const DensityModel& density = scenario.density_defaults();
  const double bound = scenario.network.defaults().gamma_max;

  CsvTable csv({"user", "demand", "kind", "path_index", "g", "analytic", "empirical", "std_error",
                "abs_error", "within_3se"});
  for (const UserDemand& demand : scenario.demands) {
    const auto [paths, costs] = find_disjoint_paths(
        scenario.network, demand.source, demand.target, demand.priority.m_max, scenario.window);
    std::vector<int> path_gs;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const int g = static_cast<int>(paths.paths[i].g());
      path_gs.push_back(g);
      const double analytic = single_path_probability_iid(density, bound, g);
      const Estimate est = estimate_single_path(g, density, bound, config);
      const double abs_error = std::abs(analytic - est.mean);
      csv.add_row({demand.user, demand.demand_id, "single", CsvTable::cell(static_cast<int>(i)),
                   CsvTable::cell(g), CsvTable::cell(analytic), CsvTable::cell(est.mean),
                   CsvTable::cell(est.std_error), CsvTable::cell(abs_error),
                   CsvTable::cell(static_cast<int>(abs_error <= 3.0 * est.std_error))});
    }
    double miss_all = 1.0;
    for (int g : path_gs) miss_all *= 1.0 - single_path_probability_iid(density, bound, g);
    const double analytic_multi = path_gs.empty() ? 0.0 : 1.0 - miss_all;
    const Estimate est = estimate_multipath(path_gs, density, bound, config);
    const double abs_error = std::abs(analytic_multi - est.mean);
    csv.add_row({demand.user, demand.demand_id, "multi", CsvTable::cell(-1),
                 CsvTable::cell(static_cast<int>(path_gs.size())), CsvTable::cell(analytic_multi),
                 CsvTable::cell(est.mean), CsvTable::cell(est.std_error),
                 CsvTable::cell(abs_error),
                 CsvTable::cell(static_cast<int>(abs_error <= 3.0 * est.std_error))});
    std::cout << demand.user << "/" << demand.demand_id << ": analytic "
              << CsvTable::cell(analytic_multi) << ", empirical " << CsvTable::cell(est.mean)
              << " (" << config.trials << " trials, seed " << config.seed << ")\n";
  }
  csv.write(out_path);
  return 0;
}

int run_validate(const std::string& scenario_path) {
  const Scenario scenario = load_scenario(scenario_path);
  std::cout << "ok: " << scenario_path << " (" << scenario.network.nodes().size() << " nodes, "
            << scenario.network.connections().size() << " connections, "
            << scenario.demands.size() << " demands)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement access control simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string m_spec = "1..5";
  std::string mode_name = "integrated";
  std::string out_path;
  int steps = 10;
  std::optional<std::uint64_t> trials_flag;
  std::optional<std::uint64_t> seed_flag;

  auto* probability = app.add_subcommand("probability", "analytic path probabilities");
  probability->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  probability->add_option("--m", m_spec, "path count or range, e.g. 3 or 1..5");
  probability->add_option("--mode", mode_name, "integrated | fidelity");
  probability->add_option("--out", out_path, "output CSV path");

  auto* route = app.add_subcommand("route", "run access control for every demand");
  route->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  route->add_option("--out", out_path, "output CSV path");

  auto* evolve = app.add_subcommand("evolve", "tabulate state evolution over the window");
  evolve->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  evolve->add_option("--steps", steps, "number of evolution steps");
  evolve->add_option("--out", out_path, "output CSV path");

  auto* montecarlo = app.add_subcommand("montecarlo", "empirical vs analytic comparison");
  montecarlo->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  montecarlo->add_option("--trials", trials_flag, "number of trials");
  montecarlo->add_option("--seed", seed_flag, "RNG seed (overrides ENTAC_SEED and scenario)");
  montecarlo->add_option("--out", out_path, "output CSV path");

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (probability->parsed()) {
      return run_probability(scenario_path, m_spec, mode_name,
                             out_path.empty() ? "probability.csv" : out_path);
    }
    if (route->parsed()) {
      return run_route(scenario_path, out_path.empty() ? "route.csv" : out_path);
    }
    if (evolve->parsed()) {
      return run_evolve(scenario_path, steps, out_path.empty() ? "evolve.csv" : out_path);
    }
    if (montecarlo->parsed()) {
      return run_montecarlo(scenario_path, trials_flag, seed_flag,
                            out_path.empty() ? "montecarlo.csv" : out_path);
    }
    if (validate_cmd->parsed()) {
      return run_validate(scenario_path);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ScenarioValidationError& e) {
    for (const std::string& violation : e.violations) {
      std::cerr << "violation: " << violation << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
