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

#ifndef PEDPLAN__PROMPTING_HPP_
#define PEDPLAN__PROMPTING_HPP_

#include "pedplan/memory.hpp"
#include "pedplan/world.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

// Scenario generator: structured observation -> natural-language prompt.
namespace pedplan::prompting
{

/// Rounds to 2 decimals; prompt and memory text only ever show rounded values.
double round2(double value);

struct EgoView
{
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double theta = 0.0;
  int lane = 0;
};

struct PedestrianView
{
  int id = 0;
  double dx = 0.0;  // longitudinal, ped.x - ego.x
  double dy = 0.0;  // lateral, ped.y - ego.y
  double vx = 0.0;
  double vy = 0.0;
  double distance = 0.0;        // footprint clearance
  double ttc = world::kNoConflict;
};

struct Observation
{
  world::VehicleState ego;
  std::vector<world::PedestrianState> pedestrians;
  world::RoadGeometry road;
  double speed_limit = 0.0;
  int step = 0;
  // Rounded views derived from the raw states above.
  EgoView ego_view;
  std::vector<PedestrianView> derived;
};

struct WorldSnapshot
{
  world::VehicleState ego;
  std::vector<world::PedestrianState> pedestrians;
  world::RoadGeometry road;
  world::MotionPlannerConfig motion;
  double speed_limit = 13.89;
  double conflict_radius = 2.8;
  int step = 0;
};

Observation build_observation(const WorldSnapshot & snapshot);

/// Plain-text template with `@section <name>` blocks and `{{placeholder}}` fields.
class PromptTemplate
{
public:
  static PromptTemplate parse(std::string_view text);
  static PromptTemplate load(const std::filesystem::path & path);
  /// The template shipped with the project.
  static PromptTemplate builtin();

  const std::string & version() const { return version_; }
  bool has_section(const std::string & name) const { return sections_.count(name) > 0; }
  const std::string & section(const std::string & name) const;

  /// Substitutes every `{{key}}`; unknown keys are an error.
  std::string render(const std::string & name, const std::map<std::string, std::string> & vars) const;

private:
  std::string version_;
  std::map<std::string, std::string> sections_;
};

struct PromptBundle
{
  std::string template_version;
  std::string system_text;
  std::string fewshot_header;
  std::vector<std::string> fewshot_blocks;
  std::string scene_text;
  std::string instruction_text;
  std::string output_format_text;
  int token_estimate = 0;

  /// User message in fixed order: few-shot section, scene, instruction, output contract.
  std::string user_text() const;
};

PromptBundle render_prompt(
  const Observation & obs, std::string_view instruction,
  std::span<const memory::MemoryEntry> fewshot, const PromptTemplate & tmpl);

/// Static driving instruction for a scenario preset.
std::string instruction_for_preset(std::string_view preset);

}  // namespace pedplan::prompting

#endif  // PEDPLAN__PROMPTING_HPP_
