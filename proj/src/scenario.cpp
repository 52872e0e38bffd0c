// Copyright 2026 The ceplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ceplan/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ceplan {

namespace {

using nlohmann::json;

void require_fields(const json& node, const std::string& where,
                    const std::set<std::string>& allowed,
                    const std::set<std::string>& required) {
  if (!node.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : node.items()) {
    (void)value;
    if (allowed.count(key) == 0)
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
  for (const auto& key : required) {
    if (!node.contains(key))
      throw ConfigError(where + ": missing field '" + key + "'");
  }
}

double number(const json& node, const std::string& where) {
  if (!node.is_number()) throw ConfigError(where + ": expected a number");
  return node.get<double>();
}

int integer(const json& node, const std::string& where) {
  if (!node.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return node.get<int>();
}

Eigen::Vector2i cell_pair(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2)
    throw ConfigError(where + ": expected [x, y]");
  return {integer(node[0], where + "[0]"), integer(node[1], where + "[1]")};
}

PreferenceParams parse_preferences(const json& node, const std::string& where) {
  require_fields(node, where,
                 {"alpha", "beta", "comfort_weight", "efficiency_weight"}, {});
  PreferenceParams prefs;
  if (node.contains("alpha")) prefs.alpha = number(node["alpha"], where + ".alpha");
  if (node.contains("beta")) prefs.beta = number(node["beta"], where + ".beta");
  if (node.contains("comfort_weight"))
    prefs.comfort_weight = number(node["comfort_weight"], where + ".comfort_weight");
  if (node.contains("efficiency_weight"))
    prefs.efficiency_weight =
        number(node["efficiency_weight"], where + ".efficiency_weight");
  return prefs;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("scenario: JSON parse error: ") + error.what());
  }

  require_fields(root, "scenario",
                 {"schema_version", "grid", "vehicle_length", "obstacles",
                  "vehicles", "sim"},
                 {"grid", "vehicles", "sim"});
  if (root.contains("schema_version") &&
      integer(root["schema_version"], "scenario.schema_version") != 1)
    throw ConfigError("scenario: unsupported schema_version");

  ScenarioConfig scenario;

  const json& grid = root["grid"];
  require_fields(grid, "scenario.grid",
                 {"spatial_resolution", "temporal_resolution", "width", "height"},
                 {"spatial_resolution", "temporal_resolution", "width", "height"});
  scenario.grid.spatial_resolution =
      number(grid["spatial_resolution"], "scenario.grid.spatial_resolution");
  scenario.grid.temporal_resolution =
      number(grid["temporal_resolution"], "scenario.grid.temporal_resolution");
  scenario.grid.width = integer(grid["width"], "scenario.grid.width");
  scenario.grid.height = integer(grid["height"], "scenario.grid.height");

  if (root.contains("vehicle_length"))
    scenario.vehicle_length =
        number(root["vehicle_length"], "scenario.vehicle_length");

  if (root.contains("obstacles")) {
    if (!root["obstacles"].is_array())
      throw ConfigError("scenario.obstacles: expected an array");
    int index = 0;
    for (const auto& item : root["obstacles"]) {
      scenario.obstacles.push_back(
          cell_pair(item, "scenario.obstacles[" + std::to_string(index) + "]"));
      ++index;
    }
  }

  if (!root["vehicles"].is_array() || root["vehicles"].empty())
    throw ConfigError("scenario.vehicles: expected a non-empty array");
  int vehicle_index = 0;
  for (const auto& item : root["vehicles"]) {
    const std::string where = "scenario.vehicles[" + std::to_string(vehicle_index) + "]";
    require_fields(item, where, {"id", "start", "goal", "approach", "preferences"},
                   {"id", "start", "goal"});
    VehicleSpec vehicle;
    vehicle.id = integer(item["id"], where + ".id");
    vehicle.start = cell_pair(item["start"], where + ".start");
    vehicle.goal = cell_pair(item["goal"], where + ".goal");
    if (item.contains("approach")) {
      if (!item["approach"].is_string())
        throw ConfigError(where + ".approach: expected a string");
      vehicle.approach = item["approach"].get<std::string>();
    }
    if (item.contains("preferences"))
      vehicle.prefs = parse_preferences(item["preferences"], where + ".preferences");
    scenario.vehicles.push_back(vehicle);
    ++vehicle_index;
  }

  const json& sim = root["sim"];
  require_fields(sim, "scenario.sim",
                 {"horizon_steps", "max_stay", "d_tor", "epsilon", "execute_steps",
                  "safety_threshold", "max_ticks", "seed"},
                 {"horizon_steps", "max_stay"});
  scenario.sim.horizon_steps = integer(sim["horizon_steps"], "scenario.sim.horizon_steps");
  scenario.sim.max_stay = integer(sim["max_stay"], "scenario.sim.max_stay");
  if (sim.contains("d_tor")) scenario.sim.d_tor = number(sim["d_tor"], "scenario.sim.d_tor");
  if (sim.contains("epsilon"))
    scenario.sim.epsilon = number(sim["epsilon"], "scenario.sim.epsilon");
  if (sim.contains("execute_steps"))
    scenario.sim.execute_steps = integer(sim["execute_steps"], "scenario.sim.execute_steps");
  if (sim.contains("safety_threshold"))
    scenario.sim.safety_threshold =
        number(sim["safety_threshold"], "scenario.sim.safety_threshold");
  if (sim.contains("max_ticks"))
    scenario.sim.max_ticks = integer(sim["max_ticks"], "scenario.sim.max_ticks");
  if (sim.contains("seed")) {
    if (!sim["seed"].is_number_integer() && !sim["seed"].is_number_unsigned())
      throw ConfigError("scenario.sim.seed: expected an integer");
    scenario.sim.seed = sim["seed"].get<std::uint64_t>();
  }

  scenario.grid.horizon = scenario.sim.horizon_steps;
  scenario.validate();
  return scenario;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw ConfigError("scenario: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << stream.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioConfig& scenario) {
  json root;
  root["schema_version"] = 1;
  root["grid"] = {{"spatial_resolution", scenario.grid.spatial_resolution},
                  {"temporal_resolution", scenario.grid.temporal_resolution},
                  {"width", scenario.grid.width},
                  {"height", scenario.grid.height}};
  root["vehicle_length"] = scenario.vehicle_length;
  root["obstacles"] = json::array();
  for (const auto& cell : scenario.obstacles)
    root["obstacles"].push_back({cell.x(), cell.y()});
  root["vehicles"] = json::array();
  for (const auto& vehicle : scenario.vehicles) {
    json item;
    item["id"] = vehicle.id;
    item["start"] = {vehicle.start.x(), vehicle.start.y()};
    item["goal"] = {vehicle.goal.x(), vehicle.goal.y()};
    item["approach"] = vehicle.approach;
    item["preferences"] = {{"alpha", vehicle.prefs.alpha},
                           {"beta", vehicle.prefs.beta},
                           {"comfort_weight", vehicle.prefs.comfort_weight},
                           {"efficiency_weight", vehicle.prefs.efficiency_weight}};
    root["vehicles"].push_back(item);
  }
  root["sim"] = {{"horizon_steps", scenario.sim.horizon_steps},
                 {"max_stay", scenario.sim.max_stay},
                 {"d_tor", scenario.sim.d_tor},
                 {"epsilon", scenario.sim.epsilon},
                 {"execute_steps", scenario.sim.execute_steps},
                 {"safety_threshold", scenario.sim.safety_threshold},
                 {"max_ticks", scenario.sim.max_ticks},
                 {"seed", scenario.sim.seed}};
  return root.dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& scenario, const std::string& path) {
  std::ofstream stream(path);
  if (!stream) throw ConfigError("scenario: cannot write '" + path + "'");
  stream << serialize_scenario(scenario);
}

}  // namespace ceplan
