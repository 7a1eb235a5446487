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

#include "pedplan/behaviors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pedplan::behaviors
{

namespace
{

constexpr std::array<std::string_view, 5> kKindNames{
  "straight_cross", "jaywalk", "turn_back", "hesitation", "bidirectional_cross"};

constexpr std::array<std::string_view, 6> kPresets{
  "single_cross", "jaywalk", "turn_back", "hesitation", "bidirectional", "three_peds"};

int ticks_for(double seconds, double dt) { return std::max(1, static_cast<int>(std::lround(seconds / dt))); }

void finish(PedestrianAgent & agent, double y)
{
  agent.state.y = y;
  agent.state.vx = 0.0;
  agent.state.vy = 0.0;
  agent.phase = Phase::Done;
}

}  // namespace

std::string_view kind_name(BehaviorKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<BehaviorKind> kind_from_name(std::string_view name)
{
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) {
      return static_cast<BehaviorKind>(i);
    }
  }
  return std::nullopt;
}

std::string_view side_name(SpawnSide side)
{
  switch (side) {
    case SpawnSide::Near:
      return "near";
    case SpawnSide::Far:
      return "far";
    case SpawnSide::Both:
      return "both";
  }
  return "near";
}

std::optional<SpawnSide> side_from_name(std::string_view name)
{
  for (auto s : {SpawnSide::Near, SpawnSide::Far, SpawnSide::Both}) {
    if (side_name(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::string_view phase_name(Phase phase)
{
  switch (phase) {
    case Phase::Waiting:
      return "waiting";
    case Phase::Walking:
      return "walking";
    case Phase::Paused:
      return "paused";
    case Phase::Done:
      return "done";
  }
  return "done";
}

void BehaviorParams::validate() const
{
  if (!(cross_speed > 0.0)) {
    throw ConfigError("behavior: cross_speed must be > 0");
  }
  if (!(turnback_fraction > 0.0 && turnback_fraction < 1.0)) {
    throw ConfigError("behavior: turnback_fraction must be in (0, 1)");
  }
  if (!(hesitation_stop_prob >= 0.0 && hesitation_stop_prob <= 1.0)) {
    throw ConfigError("behavior: hesitation_stop_prob must be in [0, 1]");
  }
  if (!(hesitation_pause > 0.0 && hesitation_interval > 0.0)) {
    throw ConfigError("behavior: hesitation timings must be > 0");
  }
  if (!(spawn_x_min <= spawn_x_max)) {
    throw ConfigError("behavior: spawn_x_min must be <= spawn_x_max");
  }
  if (!(radius > 0.0)) {
    throw ConfigError("behavior: radius must be > 0");
  }
}

void ScenarioConfig::validate() const
{
  road.validate();
  if (pedestrian_count < 0) {
    throw ConfigError("scenario: pedestrian_count must be >= 0");
  }
  if (max_steps <= 0) {
    throw ConfigError("scenario: max_steps must be > 0");
  }
  if (pedestrian_count > 0 && behaviors.empty()) {
    throw ConfigError("scenario: pedestrians requested but no behavior given");
  }
  for (const auto & b : behaviors) {
    b.params.validate();
  }
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<PedestrianAgent> spawn_pedestrians(const ScenarioConfig & cfg)
{
  cfg.validate();
  std::vector<PedestrianAgent> agents;
  agents.reserve(static_cast<std::size_t>(cfg.pedestrian_count));
  const double width = cfg.road.width();

  for (int i = 0; i < cfg.pedestrian_count; ++i) {
    const auto & spec = cfg.behaviors[static_cast<std::size_t>(i) % cfg.behaviors.size()];
    PedestrianAgent agent;
    agent.kind = spec.kind;
    agent.params = spec.params;
    agent.road_width = width;
    // Stream 0 is reserved; pedestrian i draws only from stream i + 1.
    agent.rng = RandomStream(cfg.seed, static_cast<std::uint64_t>(i) + 1);

    const double u = agent.rng.uniform();
    agent.state.id = i;
    agent.state.x = spec.params.spawn_x_min + u * (spec.params.spawn_x_max - spec.params.spawn_x_min);
    agent.state.radius = spec.params.radius;

    bool near = true;
    switch (spec.params.spawn_side) {
      case SpawnSide::Near:
        near = true;
        break;
      case SpawnSide::Far:
        near = false;
        break;
      case SpawnSide::Both:
        near = (i % 2 == 0);
        break;
    }
    agent.state.y = near ? 0.0 : width;
    agent.start_y = agent.state.y;
    agent.direction = near ? 1.0 : -1.0;
    agent.phase = spec.kind == BehaviorKind::Jaywalk ? Phase::Waiting : Phase::Walking;
    if (agent.phase == Phase::Walking) {
      agent.state.vy = agent.direction * spec.params.cross_speed;
    }
    agents.push_back(std::move(agent));
  }
  return agents;
}

PedestrianAgent step_pedestrian(PedestrianAgent agent, const world::VehicleState & ego, double dt)
{
  auto & s = agent.state;
  const auto & p = agent.params;

  switch (agent.phase) {
    case Phase::Done:
      s.vx = 0.0;
      s.vy = 0.0;
      return agent;
    case Phase::Waiting:
      if (agent.triggered || s.x - ego.x > p.trigger_x_offset) {
        s.vx = 0.0;
        s.vy = 0.0;
        return agent;
      }
      agent.triggered = true;
      agent.phase = Phase::Walking;
      break;
    case Phase::Paused:
      if (agent.pause_ticks_left > 0) {
        --agent.pause_ticks_left;
        s.vx = 0.0;
        s.vy = 0.0;
        return agent;
      }
      agent.phase = Phase::Walking;
      break;
    case Phase::Walking:
      break;
  }

  if (agent.kind == BehaviorKind::Hesitation && agent.walk_ticks >= ticks_for(p.hesitation_interval, dt)) {
    agent.walk_ticks = 0;
    if (agent.rng.uniform() < p.hesitation_stop_prob) {
      agent.phase = Phase::Paused;
      agent.pause_ticks_left = ticks_for(p.hesitation_pause, dt) - 1;
      s.vx = 0.0;
      s.vy = 0.0;
      return agent;
    }
  }

  s.vx = 0.0;
  s.vy = agent.direction * p.cross_speed;
  s.y += s.vy * dt;
  ++agent.walk_ticks;

  const double progress = (s.y - agent.start_y) * agent.direction;
  if (!agent.reversed) {
    if (agent.kind == BehaviorKind::TurnBack && progress >= p.turnback_fraction * agent.road_width) {
      agent.reversed = true;
      agent.direction = -agent.direction;
      s.vy = agent.direction * p.cross_speed;
    } else if (progress >= agent.road_width) {
      finish(agent, agent.start_y + agent.direction * agent.road_width);
    }
  } else if (progress >= 0.0) {
    // Walked back past the curb it started from.
    finish(agent, agent.start_y);
  }
  return agent;
}

std::vector<std::string> preset_names() { return {kPresets.begin(), kPresets.end()}; }

bool is_preset(std::string_view name)
{
  return std::find(kPresets.begin(), kPresets.end(), name) != kPresets.end();
}

ScenarioConfig make_preset(
  std::string_view name, std::uint64_t seed, const BehaviorParams & params,
  const world::RoadGeometry & road, const world::VehicleState & ego_start, int max_steps)
{
  ScenarioConfig cfg;
  cfg.preset = std::string(name);
  cfg.seed = seed;
  cfg.road = road;
  cfg.ego_start = ego_start;
  cfg.ego_start.lane = road.nearest_lane(ego_start.y);
  cfg.max_steps = max_steps;

  BehaviorParams p = params;
  auto single = [&](BehaviorKind kind) {
    cfg.behaviors = {{kind, p}};
    cfg.pedestrian_count = 1;
  };

  if (name == "single_cross") {
    p.spawn_side = SpawnSide::Near;
    single(BehaviorKind::StraightCross);
  } else if (name == "jaywalk") {
    // Jaywalkers stand further down the road and wait for the ego to close in.
    p.spawn_side = SpawnSide::Near;
    p.spawn_x_min += p.trigger_x_offset;
    p.spawn_x_max += p.trigger_x_offset;
    single(BehaviorKind::Jaywalk);
  } else if (name == "turn_back") {
    p.spawn_side = SpawnSide::Near;
    single(BehaviorKind::TurnBack);
  } else if (name == "hesitation") {
    p.spawn_side = SpawnSide::Near;
    single(BehaviorKind::Hesitation);
  } else if (name == "bidirectional") {
    p.spawn_side = SpawnSide::Both;
    cfg.behaviors = {{BehaviorKind::BidirectionalCross, p}};
    cfg.pedestrian_count = 2;
  } else if (name == "three_peds") {
    p.spawn_side = SpawnSide::Near;
    cfg.behaviors = {{BehaviorKind::StraightCross, p}};
    cfg.pedestrian_count = 3;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  cfg.validate();
  return cfg;
}

std::string preset_description(std::string_view name)
{
  if (name == "single_cross") {
    return "a single pedestrian crosses the road from the right curb";
  }
  if (name == "jaywalk") {
    return "a pedestrian waits at the curb and jaywalks when the vehicle approaches";
  }
  if (name == "turn_back") {
    return "a pedestrian starts crossing and abruptly turns back halfway";
  }
  if (name == "hesitation") {
    return "a pedestrian crosses with unpredictable stop-and-go motion";
  }
  if (name == "bidirectional") {
    return "two pedestrians cross from opposite curbs";
  }
  if (name == "three_peds") {
    return "three pedestrians cross the road from the right curb";
  }
  return "pedestrians near the road";
}

}  // namespace pedplan::behaviors
