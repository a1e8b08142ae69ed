#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entac/access.hpp"
#include "entac/monte_carlo.hpp"
#include "entac/network.hpp"

namespace entac {

/// One self-contained experiment: network, demands, evaluation window, and an
/// optional sampling configuration.
struct Scenario {
  NetworkGraph network;
  std::vector<UserDemand> demands;
  TimeWindow window;
  std::optional<TrialConfig> monte_carlo;

  const DensityModel& density_defaults() const { return network.defaults().density; }
};

/// Parses scenario JSON. Syntax problems raise ParseError with a 1-based
/// line/column; structural problems raise ScenarioValidationError carrying
/// every violation found, not just the first. Unknown keys are violations.
Scenario parse_scenario(const std::string& text);

/// parse_scenario over a file. Unreadable file raises ParseError at 1:1.
Scenario load_scenario(const std::string& path);

/// Canonical serialization: fixed key order, shortest round-trip numbers,
/// trailing newline. load(save(s)) == s and save is a fixed point.
std::string serialize_scenario(const Scenario& scenario);

/// serialize_scenario to a file. I/O failure raises std::runtime_error.
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace entac
