#include "entac/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "entac/errors.hpp"

namespace entac {
namespace {

using Json = nlohmann::ordered_json;

// Collects every violation before anything throws, so the error lists the
// full set of problems in one pass.
struct Collector {
  std::vector<std::string> violations;

  void add(const std::string& path, const std::string& message) {
    violations.push_back(path + ": " + message);
  }
};

std::string type_name(const Json& value) {
  switch (value.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::object: return "object";
    case Json::value_t::array: return "array";
    case Json::value_t::string: return "string";
    case Json::value_t::boolean: return "boolean";
    default: return value.is_number() ? "number" : "value";
  }
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& col) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) col.add(path, "unknown key \"" + item.key() + "\"");
  }
}

const Json* get_member(const Json& obj, const std::string& path, const char* key,
                       Collector& col, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) col.add(path + "." + key, "missing");
    return nullptr;
  }
  return &*it;
}

std::optional<double> as_number(const Json* value, const std::string& path, Collector& col) {
  if (value == nullptr) return std::nullopt;
  if (!value->is_number()) {
    col.add(path, "expected number, got " + type_name(*value));
    return std::nullopt;
  }
  return value->get<double>();
}

std::optional<double> get_number(const Json& obj, const std::string& path, const char* key,
                                 Collector& col, bool required = true) {
  return as_number(get_member(obj, path, key, col, required), path + "." + key, col);
}

std::optional<std::int64_t> get_integer(const Json& obj, const std::string& path, const char* key,
                                        Collector& col, bool required = true) {
  const Json* value = get_member(obj, path, key, col, required);
  if (value == nullptr) return std::nullopt;
  if (!value->is_number_integer()) {
    col.add(path + "." + key, "expected integer, got " + type_name(*value));
    return std::nullopt;
  }
  return value->get<std::int64_t>();
}

std::optional<std::string> get_string(const Json& obj, const std::string& path, const char* key,
                                      Collector& col, bool required = true) {
  const Json* value = get_member(obj, path, key, col, required);
  if (value == nullptr) return std::nullopt;
  if (!value->is_string()) {
    col.add(path + "." + key, "expected string, got " + type_name(*value));
    return std::nullopt;
  }
  return value->get<std::string>();
}

std::optional<std::vector<double>> get_number_array(const Json& obj, const std::string& path,
                                                    const char* key, Collector& col) {
  const Json* value = get_member(obj, path, key, col);
  if (value == nullptr) return std::nullopt;
  if (!value->is_array()) {
    col.add(path + "." + key, "expected array, got " + type_name(*value));
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < value->size(); ++i) {
    auto item = as_number(&(*value)[i], path + "." + key + "[" + std::to_string(i) + "]", col);
    if (!item) return std::nullopt;
    out.push_back(*item);
  }
  return out;
}

std::optional<DriftFunction> parse_drift(const Json& obj, const std::string& path,
                                         Collector& col) {
  if (!obj.is_object()) {
    col.add(path, "expected object, got " + type_name(obj));
    return std::nullopt;
  }
  auto kind = get_string(obj, path, "kind", col);
  if (!kind) return std::nullopt;
  try {
    if (*kind == "constant") {
      check_keys(obj, path, {"kind", "value"}, col);
      auto value = get_number(obj, path, "value", col);
      if (!value) return std::nullopt;
      return DriftFunction::constant(*value);
    }
    if (*kind == "linear") {
      check_keys(obj, path, {"kind", "offset", "slope"}, col);
      auto offset = get_number(obj, path, "offset", col);
      auto slope = get_number(obj, path, "slope", col);
      if (!offset || !slope) return std::nullopt;
      return DriftFunction::linear(*offset, *slope);
    }
    if (*kind == "exp-decay") {
      check_keys(obj, path, {"kind", "amplitude", "rate"}, col);
      auto amplitude = get_number(obj, path, "amplitude", col);
      auto rate = get_number(obj, path, "rate", col);
      if (!amplitude || !rate) return std::nullopt;
      return DriftFunction::exp_decay(*amplitude, *rate);
    }
    if (*kind == "sin") {
      check_keys(obj, path, {"kind", "amplitude", "omega", "phase"}, col);
      auto amplitude = get_number(obj, path, "amplitude", col);
      auto omega = get_number(obj, path, "omega", col);
      auto phase = obj.contains("phase") ? get_number(obj, path, "phase", col)
                                         : std::optional<double>(0.0);
      if (!amplitude || !omega || !phase) return std::nullopt;
      return DriftFunction::sinusoidal(*amplitude, *omega, *phase);
    }
    if (*kind == "piecewise") {
      check_keys(obj, path, {"kind", "times", "values"}, col);
      auto times = get_number_array(obj, path, "times", col);
      auto values = get_number_array(obj, path, "values", col);
      if (!times || !values) return std::nullopt;
      return DriftFunction::piecewise(std::move(*times), std::move(*values));
    }
  } catch (const DomainError& e) {
    col.add(path, e.what());
    return std::nullopt;
  }
  col.add(path + ".kind", "unknown drift kind \"" + *kind + "\"");
  return std::nullopt;
}

std::optional<EvolutionProfile> parse_profile(const Json& obj, const std::string& path,
                                              Collector& col) {
  if (!obj.is_object()) {
    col.add(path, "expected object, got " + type_name(obj));
    return std::nullopt;
  }
  check_keys(obj, path, {"prob", "fidelity"}, col);
  const Json* prob = get_member(obj, path, "prob", col);
  const Json* fid = get_member(obj, path, "fidelity", col);
  if (prob == nullptr || fid == nullptr) return std::nullopt;
  auto phi_prob = parse_drift(*prob, path + ".prob", col);
  auto phi_fid = parse_drift(*fid, path + ".fidelity", col);
  if (!phi_prob || !phi_fid) return std::nullopt;
  return EvolutionProfile{std::move(*phi_prob), std::move(*phi_fid)};
}

std::optional<NodeState> parse_state(const Json& obj, const std::string& path, Collector& col) {
  if (!obj.is_object()) {
    col.add(path, "expected object, got " + type_name(obj));
    return std::nullopt;
  }
  check_keys(obj, path, {"prob", "fidelity"}, col);
  auto prob = get_number(obj, path, "prob", col);
  auto fid = get_number(obj, path, "fidelity", col);
  if (!prob || !fid) return std::nullopt;
  return NodeState{*prob, *fid};
}

std::optional<DensityModel> parse_density(const Json& obj, const std::string& path,
                                          Collector& col) {
  if (!obj.is_object()) {
    col.add(path, "expected object, got " + type_name(obj));
    return std::nullopt;
  }
  auto kind = get_string(obj, path, "kind", col);
  if (!kind) return std::nullopt;
  try {
    if (*kind == "exponential") {
      check_keys(obj, path, {"kind", "lambda"}, col);
      auto lambda = get_number(obj, path, "lambda", col);
      if (!lambda) return std::nullopt;
      return DensityModel::exponential(*lambda);
    }
    if (*kind == "uniform") {
      check_keys(obj, path, {"kind", "lo", "hi"}, col);
      auto lo = get_number(obj, path, "lo", col);
      auto hi = get_number(obj, path, "hi", col);
      if (!lo || !hi) return std::nullopt;
      return DensityModel::uniform(*lo, *hi);
    }
    if (*kind == "truncated-normal") {
      check_keys(obj, path, {"kind", "mu", "sigma", "lo", "hi"}, col);
      auto mu = get_number(obj, path, "mu", col);
      auto sigma = get_number(obj, path, "sigma", col);
      auto lo = get_number(obj, path, "lo", col);
      auto hi = get_number(obj, path, "hi", col);
      if (!mu || !sigma || !lo || !hi) return std::nullopt;
      return DensityModel::truncated_normal(*mu, *sigma, *lo, *hi);
    }
    if (*kind == "tabulated") {
      check_keys(obj, path, {"kind", "points"}, col);
      const Json* points = get_member(obj, path, "points", col);
      if (points == nullptr) return std::nullopt;
      if (!points->is_array()) {
        col.add(path + ".points", "expected array, got " + type_name(*points));
        return std::nullopt;
      }
      std::vector<std::pair<double, double>> parsed;
      for (std::size_t i = 0; i < points->size(); ++i) {
        const std::string item_path = path + ".points[" + std::to_string(i) + "]";
        const Json& item = (*points)[i];
        if (!item.is_array() || item.size() != 2) {
          col.add(item_path, "expected [z, density] pair");
          return std::nullopt;
        }
        auto z = as_number(&item[0], item_path + "[0]", col);
        auto w = as_number(&item[1], item_path + "[1]", col);
        if (!z || !w) return std::nullopt;
        parsed.emplace_back(*z, *w);
      }
      return DensityModel::tabulated(std::move(parsed));
    }
  } catch (const DomainError& e) {
    col.add(path, e.what());
    return std::nullopt;
  }
  col.add(path + ".kind", "unknown density kind \"" + *kind + "\"");
  return std::nullopt;
}

Json drift_to_json(const DriftFunction& drift) {
  Json out;
  switch (drift.kind) {
    case DriftFunction::Kind::Constant:
      out["kind"] = "constant";
      out["value"] = drift.value;
      break;
    case DriftFunction::Kind::Linear:
      out["kind"] = "linear";
      out["offset"] = drift.offset;
      out["slope"] = drift.slope;
      break;
    case DriftFunction::Kind::ExpDecay:
      out["kind"] = "exp-decay";
      out["amplitude"] = drift.amplitude;
      out["rate"] = drift.rate;
      break;
    case DriftFunction::Kind::Sinusoidal:
      out["kind"] = "sin";
      out["amplitude"] = drift.amplitude;
      out["omega"] = drift.omega;
      out["phase"] = drift.phase;
      break;
    case DriftFunction::Kind::Piecewise:
      out["kind"] = "piecewise";
      out["times"] = drift.times;
      out["values"] = drift.values;
      break;
  }
  return out;
}

Json profile_to_json(const EvolutionProfile& profile) {
  return Json{{"prob", drift_to_json(profile.phi_prob)},
              {"fidelity", drift_to_json(profile.phi_fid)}};
}

Json state_to_json(const NodeState& state) {
  return Json{{"prob", state.connection_probability}, {"fidelity", state.fidelity}};
}

Json density_to_json(const DensityModel& density) {
  Json out;
  switch (density.kind) {
    case DensityModel::Kind::Exponential:
      out["kind"] = "exponential";
      out["lambda"] = density.lambda;
      break;
    case DensityModel::Kind::Uniform:
      out["kind"] = "uniform";
      out["lo"] = density.lo;
      out["hi"] = density.hi;
      break;
    case DensityModel::Kind::TruncatedNormal:
      out["kind"] = "truncated-normal";
      out["mu"] = density.mu;
      out["sigma"] = density.sigma;
      out["lo"] = density.lo;
      out["hi"] = density.hi;
      break;
    case DensityModel::Kind::Tabulated: {
      out["kind"] = "tabulated";
      Json points = Json::array();
      for (const auto& [z, w] : density.points) points.push_back(Json::array({z, w}));
      out["points"] = std::move(points);
      break;
    }
  }
  return out;
}

Scenario build_scenario(const Json& doc) {
  Collector col;
  if (!doc.is_object()) {
    throw ScenarioValidationError({"$: expected top-level object, got " + type_name(doc)});
  }
  check_keys(doc, "$", {"nodes", "connections", "defaults", "demands", "window", "monte_carlo"},
             col);

  std::vector<NodeId> nodes;
  if (const Json* arr = get_member(doc, "$", "nodes", col)) {
    if (!arr->is_array()) {
      col.add("$.nodes", "expected array, got " + type_name(*arr));
    } else {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const Json& item = (*arr)[i];
        if (!item.is_string()) {
          col.add("$.nodes[" + std::to_string(i) + "]", "expected string node id");
        } else {
          nodes.push_back(item.get<std::string>());
        }
      }
    }
  }

  std::vector<EntangledConnection> connections;
  if (const Json* arr = get_member(doc, "$", "connections", col)) {
    if (!arr->is_array()) {
      col.add("$.connections", "expected array, got " + type_name(*arr));
    } else {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string path = "$.connections[" + std::to_string(i) + "]";
        const Json& item = (*arr)[i];
        if (!item.is_object()) {
          col.add(path, "expected object, got " + type_name(item));
          continue;
        }
        check_keys(item, path,
                   {"x", "y", "level", "state_x", "state_y", "profile_x", "profile_y",
                    "gamma_max"},
                   col);
        EntangledConnection conn;
        auto x = get_string(item, path, "x", col);
        auto y = get_string(item, path, "y", col);
        auto level = get_integer(item, path, "level", col);
        std::optional<NodeState> state_x, state_y;
        std::optional<EvolutionProfile> profile_x, profile_y;
        if (const Json* v = get_member(item, path, "state_x", col)) {
          state_x = parse_state(*v, path + ".state_x", col);
        }
        if (const Json* v = get_member(item, path, "state_y", col)) {
          state_y = parse_state(*v, path + ".state_y", col);
        }
        if (const Json* v = get_member(item, path, "profile_x", col)) {
          profile_x = parse_profile(*v, path + ".profile_x", col);
        }
        if (const Json* v = get_member(item, path, "profile_y", col)) {
          profile_y = parse_profile(*v, path + ".profile_y", col);
        }
        std::optional<double> gamma_max;
        if (item.contains("gamma_max")) {
          gamma_max = get_number(item, path, "gamma_max", col);
          if (!gamma_max) continue;
        }
        if (!x || !y || !level || !state_x || !state_y || !profile_x || !profile_y) continue;
        conn.endpoint_x = std::move(*x);
        conn.endpoint_y = std::move(*y);
        conn.level = static_cast<int>(*level);
        conn.state_at_x = *state_x;
        conn.state_at_y = *state_y;
        conn.profile_x = std::move(*profile_x);
        conn.profile_y = std::move(*profile_y);
        conn.gamma_max = gamma_max;
        connections.push_back(std::move(conn));
      }
    }
  }

  NetworkDefaults defaults;
  if (const Json* obj = get_member(doc, "$", "defaults", col)) {
    if (!obj->is_object()) {
      col.add("$.defaults", "expected object, got " + type_name(*obj));
    } else {
      check_keys(*obj, "$.defaults", {"gamma_max", "f_crit", "f_delta_max", "density"}, col);
      auto gamma_max = get_number(*obj, "$.defaults", "gamma_max", col);
      auto f_crit = get_number(*obj, "$.defaults", "f_crit", col);
      auto f_delta_max = get_number(*obj, "$.defaults", "f_delta_max", col);
      if (gamma_max && !(*gamma_max >= 0.0)) col.add("$.defaults.gamma_max", "must be >= 0");
      if (f_crit && !(*f_crit >= 0.0 && *f_crit <= 1.0)) {
        col.add("$.defaults.f_crit", "must lie in [0, 1]");
      }
      if (f_delta_max && !(*f_delta_max >= 0.0)) col.add("$.defaults.f_delta_max", "must be >= 0");
      if (gamma_max) defaults.gamma_max = *gamma_max;
      if (f_crit) defaults.f_crit = *f_crit;
      if (f_delta_max) defaults.f_delta_max = *f_delta_max;
      if (const Json* density = get_member(*obj, "$.defaults", "density", col)) {
        if (auto parsed = parse_density(*density, "$.defaults.density", col)) {
          defaults.density = std::move(*parsed);
        }
      }
    }
  }

  std::vector<UserDemand> demands;
  if (const Json* arr = get_member(doc, "$", "demands", col)) {
    if (!arr->is_array()) {
      col.add("$.demands", "expected array, got " + type_name(*arr));
    } else {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string path = "$.demands[" + std::to_string(i) + "]";
        const Json& item = (*arr)[i];
        if (!item.is_object()) {
          col.add(path, "expected object, got " + type_name(item));
          continue;
        }
        check_keys(item, path,
                   {"user", "id", "source", "target", "priority", "pr_min", "pr_max"}, col);
        UserDemand demand;
        auto user = get_string(item, path, "user", col);
        auto id = get_string(item, path, "id", col);
        auto source = get_string(item, path, "source", col);
        auto target = get_string(item, path, "target", col);
        auto pr_min = get_number(item, path, "pr_min", col);
        auto pr_max = get_number(item, path, "pr_max", col);
        std::optional<PriorityClass> priority;
        if (const Json* obj = get_member(item, path, "priority", col)) {
          if (!obj->is_object()) {
            col.add(path + ".priority", "expected object, got " + type_name(*obj));
          } else {
            check_keys(*obj, path + ".priority", {"name", "m_initial", "m_max"}, col);
            auto name = get_string(*obj, path + ".priority", "name", col);
            auto m_initial = get_integer(*obj, path + ".priority", "m_initial", col);
            auto m_max = get_integer(*obj, path + ".priority", "m_max", col);
            if (name && m_initial && m_max) {
              priority = PriorityClass{std::move(*name), static_cast<int>(*m_initial),
                                       static_cast<int>(*m_max)};
            }
          }
        }
        if (!user || !id || !source || !target || !pr_min || !pr_max || !priority) continue;
        demand.user = std::move(*user);
        demand.demand_id = std::move(*id);
        demand.source = std::move(*source);
        demand.target = std::move(*target);
        demand.priority = std::move(*priority);
        demand.pr_min = *pr_min;
        demand.pr_max = *pr_max;
        demands.push_back(std::move(demand));
      }
    }
  }

  TimeWindow window;
  if (const Json* obj = get_member(doc, "$", "window", col)) {
    if (!obj->is_object()) {
      col.add("$.window", "expected object, got " + type_name(*obj));
    } else {
      check_keys(*obj, "$.window", {"t0", "dt"}, col);
      auto t0 = get_number(*obj, "$.window", "t0", col);
      auto dt = get_number(*obj, "$.window", "dt", col);
      if (t0) window.t0 = *t0;
      if (dt) {
        if (*dt < 0.0) col.add("$.window.dt", "must be >= 0");
        window.dt = *dt;
      }
    }
  }

  std::optional<TrialConfig> trial_config;
  if (doc.contains("monte_carlo")) {
    const Json& obj = doc["monte_carlo"];
    if (!obj.is_object()) {
      col.add("$.monte_carlo", "expected object, got " + type_name(obj));
    } else {
      check_keys(obj, "$.monte_carlo", {"trials", "seed"}, col);
      auto trials = get_integer(obj, "$.monte_carlo", "trials", col);
      auto seed = get_integer(obj, "$.monte_carlo", "seed", col);
      if (trials && *trials < 1) col.add("$.monte_carlo.trials", "must be >= 1");
      if (seed && *seed < 0) col.add("$.monte_carlo.seed", "must be >= 0");
      if (trials && seed && *trials >= 1 && *seed >= 0) {
        trial_config = TrialConfig{static_cast<std::uint64_t>(*trials),
                                   static_cast<std::uint64_t>(*seed)};
      }
    }
  }

  Scenario scenario;
  scenario.network = NetworkGraph(std::move(nodes), std::move(connections), defaults);
  scenario.demands = std::move(demands);
  scenario.window = window;
  scenario.monte_carlo = trial_config;

  for (const ValidationIssue& issue : validate(scenario.network).issues) {
    col.add("$.network", issue.code + ": " + issue.message);
  }

  for (std::size_t i = 0; i < scenario.demands.size(); ++i) {
    const std::string path = "$.demands[" + std::to_string(i) + "]";
    const UserDemand& demand = scenario.demands[i];
    if (!scenario.network.has_node(demand.source)) {
      col.add(path + ".source", "unknown node \"" + demand.source + "\"");
    }
    if (!scenario.network.has_node(demand.target)) {
      col.add(path + ".target", "unknown node \"" + demand.target + "\"");
    }
    if (demand.source == demand.target) {
      col.add(path, "source and target must differ");
    }
    if (!(demand.pr_min >= 0.0 && demand.pr_min <= 1.0)) {
      col.add(path + ".pr_min", "must lie in [0, 1]");
    }
    if (!(demand.pr_max > demand.pr_min && demand.pr_max <= 1.0)) {
      col.add(path + ".pr_max", "must lie in (pr_min, 1]");
    }
    if (demand.priority.m_initial < 1) {
      col.add(path + ".priority.m_initial", "must be >= 1");
    }
    if (demand.priority.m_max < demand.priority.m_initial) {
      col.add(path + ".priority.m_max", "must be >= m_initial");
    }
  }

  if (!col.violations.empty()) throw ScenarioValidationError(std::move(col.violations));
  return scenario;
}

// nlohmann reports byte offsets; recover 1-based line/column from the text.
std::pair<std::size_t, std::size_t> position_at(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = position_at(text, byte);
    std::ostringstream what;
    what << "parse error at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(what.str(), line, column);
  }
  return build_scenario(doc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open scenario file: " + path, 1, 1);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  Json doc;
  doc["nodes"] = scenario.network.nodes();

  Json connections = Json::array();
  for (const EntangledConnection& conn : scenario.network.connections()) {
    Json item;
    item["x"] = conn.endpoint_x;
    item["y"] = conn.endpoint_y;
    item["level"] = conn.level;
    item["state_x"] = state_to_json(conn.state_at_x);
    item["state_y"] = state_to_json(conn.state_at_y);
    item["profile_x"] = profile_to_json(conn.profile_x);
    item["profile_y"] = profile_to_json(conn.profile_y);
    if (conn.gamma_max) item["gamma_max"] = *conn.gamma_max;
    connections.push_back(std::move(item));
  }
  doc["connections"] = std::move(connections);

  const NetworkDefaults& defaults = scenario.network.defaults();
  doc["defaults"] = Json{{"gamma_max", defaults.gamma_max},
                         {"f_crit", defaults.f_crit},
                         {"f_delta_max", defaults.f_delta_max},
                         {"density", density_to_json(defaults.density)}};

  Json demands = Json::array();
  for (const UserDemand& demand : scenario.demands) {
    Json item;
    item["user"] = demand.user;
    item["id"] = demand.demand_id;
    item["source"] = demand.source;
    item["target"] = demand.target;
    item["priority"] = Json{{"name", demand.priority.name},
                            {"m_initial", demand.priority.m_initial},
                            {"m_max", demand.priority.m_max}};
    item["pr_min"] = demand.pr_min;
    item["pr_max"] = demand.pr_max;
    demands.push_back(std::move(item));
  }
  doc["demands"] = std::move(demands);

  doc["window"] = Json{{"t0", scenario.window.t0}, {"dt", scenario.window.dt}};

  if (scenario.monte_carlo) {
    doc["monte_carlo"] = Json{{"trials", scenario.monte_carlo->trials},
                              {"seed", scenario.monte_carlo->seed}};
  }

  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << serialize_scenario(scenario);
  if (!out) {
    throw std::runtime_error("failed to write scenario: " + path);
  }
}

}  // namespace entac
