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

#pragma once

#include <string>

#include "ceplan/sim.hpp"

namespace ceplan {

/// Parses a scenario from its JSON text. Unknown fields are rejected;
/// errors carry the offending field path. The parsed scenario is validated.
ScenarioConfig parse_scenario(const std::string& json_text);

/// Reads and parses a scenario file.
ScenarioConfig load_scenario(const std::string& path);

/// Serializes a scenario; parse(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const ScenarioConfig& scenario);

void save_scenario(const ScenarioConfig& scenario, const std::string& path);

}  // namespace ceplan
