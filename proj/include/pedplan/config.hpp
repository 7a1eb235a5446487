// Copyright 2026 The pedplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEDPLAN__CONFIG_HPP_
#define PEDPLAN__CONFIG_HPP_

#include "pedplan/behaviors.hpp"
#include "pedplan/llm_client.hpp"
#include "pedplan/memory.hpp"
#include "pedplan/policy.hpp"
#include "pedplan/world.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>

namespace pedplan::engine
{

struct EngineConfig
{
  int horizon_steps = 10;        // sim steps per decision
  int max_steps = 600;
  int pipeline_depth = 0;        // 0 = synchronous, 1 = next decision dispatched during execution
  double goal_x = 200.0;
  double tick_wall_time = 0.0;   // wall-clock pacing per sim step [s]; 0 runs unpaced
  double decision_deadline = 90.0;

  void validate() const;
  bool operator==(const EngineConfig &) const = default;
};

}  // namespace pedplan::engine

namespace pedplan::config
{

struct MemorySettings
{
  memory::RetrievalConfig retrieval;
  int k = 3;
  double ttc_cap = 10.0;
  double attention_radius = 40.0;

  memory::BankBuildConfig build_config(double conflict_radius) const;
};

/// Every tunable of a run. Serialized as one JSON document whose layout is the config file
/// format (docs/config.md).
struct SimConfig
{
  world::RoadGeometry road;
  world::MotionPlannerConfig motion;
  world::VehicleState ego_start{0.0, 4.8, 8.0, 0.0, 1};
  behaviors::BehaviorParams pedestrian;
  double ttc_conflict_radius = 2.8;
  double speed_limit = 13.89;
  MemorySettings memory;
  policy::RuleParams rule;
  policy::LlmClientConfig llm;
  engine::EngineConfig engine;

  void validate() const;
};

nlohmann::json to_json(const SimConfig & cfg);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
SimConfig from_json(const nlohmann::json & doc);

/// Hex SHA-256 of the canonical snapshot. The API key is never part of the snapshot.
std::string config_hash(const nlohmann::json & snapshot);

/// Layers: defaults < config file < environment < flag overrides (JSON merge patches).
struct Layers
{
  std::optional<std::filesystem::path> file;
  std::map<std::string, std::string> environment;
  nlohmann::json flag_patch = nlohmann::json::object();
};

SimConfig resolve(const Layers & layers);

/// Environment variables consulted by `resolve`.
std::map<std::string, std::string> read_environment();

inline constexpr const char * kEnvEndpoint = "PEDPLAN_LLM_ENDPOINT";
inline constexpr const char * kEnvApiKey = "PEDPLAN_LLM_API_KEY";
inline constexpr const char * kEnvModel = "PEDPLAN_LLM_MODEL";
inline constexpr const char * kEnvParallelism = "PEDPLAN_PARALLELISM";
inline constexpr const char * kEnvDataDir = "PEDPLAN_DATA_DIR";

/// Directory holding the shipped prompt template and memory banks.
std::filesystem::path data_dir();

}  // namespace pedplan::config

#endif  // PEDPLAN__CONFIG_HPP_
