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

#ifndef PEDPLAN__TRACE_HPP_
#define PEDPLAN__TRACE_HPP_

#include "pedplan/behaviors.hpp"
#include "pedplan/world.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pedplan::engine
{

inline constexpr int kTraceSchemaVersion = 1;

struct StepRecord
{
  int step = 0;
  int cycle = 0;
  world::VehicleState ego;
  std::vector<world::PedestrianState> pedestrians;
  // Command in force while reaching this step. Step 0 carries a default-constructed command.
  world::ActionCommand command;
  std::optional<double> min_distance;   // nullopt when there are no pedestrians
  double min_ttc = world::kNoConflict;

  bool operator==(const StepRecord &) const = default;
};

struct DecisionRecord
{
  int index = 0;
  std::string request_id;
  int obs_step = 0;      // step whose observation produced the prompt
  int apply_step = 0;    // step at which the action took effect
  int staleness = 0;     // cycles between observation and application
  std::string prompt_hash;
  std::string raw_text;
  Action action = kSafetyFallback;
  bool parse_ok = false;
  double latency_s = 0.0;
  DecisionSource source = DecisionSource::Fallback;
  std::vector<std::size_t> retrieved;

  bool operator==(const DecisionRecord &) const = default;
};

struct EpisodeTrace
{
  int schema_version = kTraceSchemaVersion;
  std::uint64_t seed = 0;
  std::string preset;
  std::string policy;
  std::string template_version;
  std::string config_hash;
  nlohmann::json config;  // effective configuration snapshot
  behaviors::ScenarioConfig scenario;
  Outcome outcome = Outcome::Timeout;
  std::vector<StepRecord> steps;
  std::vector<DecisionRecord> decisions;

  bool operator==(const EpisodeTrace &) const = default;
};

/// `include_timing=false` drops wall-clock fields so two runs can be compared byte for byte.
nlohmann::json trace_to_json(const EpisodeTrace & trace, bool include_timing = true);
EpisodeTrace trace_from_json(const nlohmann::json & doc);

/// Deterministic text of a trace with timing removed.
std::string canonical_trace_text(const EpisodeTrace & trace);

void write_trace(const EpisodeTrace & trace, const std::filesystem::path & path);
EpisodeTrace read_trace(const std::filesystem::path & path);

/// All `*.json` traces directly inside `dir`, sorted by file name. Manifest and report files are
/// skipped.
std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path & dir);

}  // namespace pedplan::engine

#endif  // PEDPLAN__TRACE_HPP_
