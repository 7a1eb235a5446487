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

#ifndef PEDPLAN__BEHAVIORS_HPP_
#define PEDPLAN__BEHAVIORS_HPP_

#include "pedplan/world.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pedplan::behaviors
{

enum class BehaviorKind { StraightCross, Jaywalk, TurnBack, Hesitation, BidirectionalCross };

std::string_view kind_name(BehaviorKind kind);
std::optional<BehaviorKind> kind_from_name(std::string_view name);

enum class SpawnSide { Near, Far, Both };

std::string_view side_name(SpawnSide side);
std::optional<SpawnSide> side_from_name(std::string_view name);

struct BehaviorParams
{
  double cross_speed = 1.4;           // [m/s]
  double trigger_x_offset = 30.0;     // jaywalk: ego gap that starts the crossing [m]
  double turnback_fraction = 0.5;     // fraction of road width crossed before reversing
  double hesitation_stop_prob = 0.3;  // per hesitation interval
  double hesitation_pause = 1.0;      // [s]
  double hesitation_interval = 1.0;   // walking time between stop draws [s]
  double spawn_x_min = 25.0;
  double spawn_x_max = 55.0;
  SpawnSide spawn_side = SpawnSide::Near;
  double radius = 0.3;

  void validate() const;
  bool operator==(const BehaviorParams &) const = default;
};

struct PedestrianSpec
{
  BehaviorKind kind = BehaviorKind::StraightCross;
  BehaviorParams params;

  bool operator==(const PedestrianSpec &) const = default;
};

struct ScenarioConfig
{
  std::string preset;
  // Pedestrian i uses behaviors[i % behaviors.size()].
  std::vector<PedestrianSpec> behaviors;
  int pedestrian_count = 0;
  std::uint64_t seed = 0;
  int max_steps = 600;
  world::VehicleState ego_start;
  world::RoadGeometry road;

  void validate() const;
  bool operator==(const ScenarioConfig &) const = default;
};

/// Independent, portable random stream. Bits come straight from mt19937_64, so draws are
/// identical across standard libraries.
class RandomStream
{
public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform double in [0, 1).
  double uniform();

  bool operator==(const RandomStream &) const = default;

private:
  std::mt19937_64 engine_;
};

enum class Phase { Waiting, Walking, Paused, Done };

std::string_view phase_name(Phase phase);

struct PedestrianAgent
{
  world::PedestrianState state;
  BehaviorKind kind = BehaviorKind::StraightCross;
  BehaviorParams params;
  Phase phase = Phase::Walking;
  double direction = 1.0;  // +1 walks toward +y, -1 toward -y
  double start_y = 0.0;
  double road_width = 0.0;
  bool triggered = false;
  bool reversed = false;
  int walk_ticks = 0;
  int pause_ticks_left = 0;
  RandomStream rng;
};

std::vector<PedestrianAgent> spawn_pedestrians(const ScenarioConfig & cfg);

/// Advances one behavior tick. Pedestrians never react to the ego except for the jaywalk trigger.
PedestrianAgent step_pedestrian(PedestrianAgent agent, const world::VehicleState & ego, double dt);

// Named scenario presets.
std::vector<std::string> preset_names();
bool is_preset(std::string_view name);

/// Builds a preset scenario. `params` supplies the behavior defaults the preset then adjusts
/// (spawn side, kind).
ScenarioConfig make_preset(
  std::string_view name, std::uint64_t seed, const BehaviorParams & params,
  const world::RoadGeometry & road, const world::VehicleState & ego_start, int max_steps);

/// Short natural-language description of what pedestrians do in a preset.
std::string preset_description(std::string_view name);

}  // namespace pedplan::behaviors

#endif  // PEDPLAN__BEHAVIORS_HPP_
