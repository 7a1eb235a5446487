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

#include "pedplan/serialization.hpp"

#include <cmath>
#include <limits>

namespace pedplan
{

nlohmann::json number_or_inf(double value)
{
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  return value;
}

double number_or_inf_from(const nlohmann::json & j)
{
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    throw FormatError("expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace pedplan

namespace pedplan::world
{

void to_json(nlohmann::json & j, const RoadGeometry & r)
{
  j = {{"lane_count", r.lane_count}, {"lane_width", r.lane_width}, {"length", r.length}};
}

void from_json(const nlohmann::json & j, RoadGeometry & r)
{
  j.at("lane_count").get_to(r.lane_count);
  j.at("lane_width").get_to(r.lane_width);
  j.at("length").get_to(r.length);
}

void to_json(nlohmann::json & j, const VehicleState & s)
{
  j = {{"x", s.x}, {"y", s.y}, {"v", s.v}, {"theta", s.theta}, {"lane", s.lane}};
}

void from_json(const nlohmann::json & j, VehicleState & s)
{
  j.at("x").get_to(s.x);
  j.at("y").get_to(s.y);
  j.at("v").get_to(s.v);
  j.at("theta").get_to(s.theta);
  j.at("lane").get_to(s.lane);
}

void to_json(nlohmann::json & j, const PedestrianState & p)
{
  j = {{"id", p.id}, {"x", p.x}, {"y", p.y}, {"vx", p.vx}, {"vy", p.vy}, {"radius", p.radius}};
}

void from_json(const nlohmann::json & j, PedestrianState & p)
{
  j.at("id").get_to(p.id);
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
  j.at("vx").get_to(p.vx);
  j.at("vy").get_to(p.vy);
  j.at("radius").get_to(p.radius);
}

void to_json(nlohmann::json & j, const MotionPlannerConfig & c)
{
  j = {{"dt", c.dt},
       {"a_max", c.a_max},
       {"k_theta", c.k_theta},
       {"v_max", c.v_max},
       {"speed_step", c.speed_step},
       {"vehicle_length", c.vehicle_length},
       {"vehicle_width", c.vehicle_width},
       {"lookahead", c.lookahead},
       {"max_heading", c.max_heading}};
}

void from_json(const nlohmann::json & j, MotionPlannerConfig & c)
{
  j.at("dt").get_to(c.dt);
  j.at("a_max").get_to(c.a_max);
  j.at("k_theta").get_to(c.k_theta);
  j.at("v_max").get_to(c.v_max);
  j.at("speed_step").get_to(c.speed_step);
  j.at("vehicle_length").get_to(c.vehicle_length);
  j.at("vehicle_width").get_to(c.vehicle_width);
  j.at("lookahead").get_to(c.lookahead);
  j.at("max_heading").get_to(c.max_heading);
}

void to_json(nlohmann::json & j, const ActionCommand & c)
{
  j = {{"action", to_index(c.action)},
       {"v_target", c.v_target},
       {"theta_target", c.theta_target},
       {"degraded", c.degraded}};
}

void from_json(const nlohmann::json & j, ActionCommand & c)
{
  const auto action = action_from_index(j.at("action").get<int>());
  if (!action) {
    throw FormatError("invalid action index in command");
  }
  c.action = *action;
  j.at("v_target").get_to(c.v_target);
  j.at("theta_target").get_to(c.theta_target);
  j.at("degraded").get_to(c.degraded);
}

}  // namespace pedplan::world

namespace pedplan::behaviors
{

void to_json(nlohmann::json & j, const BehaviorParams & p)
{
  j = {{"cross_speed", p.cross_speed},
       {"trigger_x_offset", p.trigger_x_offset},
       {"turnback_fraction", p.turnback_fraction},
       {"hesitation_stop_prob", p.hesitation_stop_prob},
       {"hesitation_pause", p.hesitation_pause},
       {"hesitation_interval", p.hesitation_interval},
       {"spawn_x_min", p.spawn_x_min},
       {"spawn_x_max", p.spawn_x_max},
       {"spawn_side", side_name(p.spawn_side)},
       {"radius", p.radius}};
}

void from_json(const nlohmann::json & j, BehaviorParams & p)
{
  j.at("cross_speed").get_to(p.cross_speed);
  j.at("trigger_x_offset").get_to(p.trigger_x_offset);
  j.at("turnback_fraction").get_to(p.turnback_fraction);
  j.at("hesitation_stop_prob").get_to(p.hesitation_stop_prob);
  j.at("hesitation_pause").get_to(p.hesitation_pause);
  j.at("hesitation_interval").get_to(p.hesitation_interval);
  j.at("spawn_x_min").get_to(p.spawn_x_min);
  j.at("spawn_x_max").get_to(p.spawn_x_max);
  const auto side = side_from_name(j.at("spawn_side").get<std::string>());
  if (!side) {
    throw ConfigError("invalid spawn_side");
  }
  p.spawn_side = *side;
  j.at("radius").get_to(p.radius);
}

void to_json(nlohmann::json & j, const PedestrianSpec & s)
{
  j = {{"kind", kind_name(s.kind)}, {"params", s.params}};
}

void from_json(const nlohmann::json & j, PedestrianSpec & s)
{
  const auto kind = kind_from_name(j.at("kind").get<std::string>());
  if (!kind) {
    throw ConfigError("invalid behavior kind");
  }
  s.kind = *kind;
  j.at("params").get_to(s.params);
}

void to_json(nlohmann::json & j, const ScenarioConfig & c)
{
  j = {{"preset", c.preset},
       {"behaviors", c.behaviors},
       {"pedestrian_count", c.pedestrian_count},
       {"seed", c.seed},
       {"max_steps", c.max_steps},
       {"ego_start", c.ego_start},
       {"road", c.road}};
}

void from_json(const nlohmann::json & j, ScenarioConfig & c)
{
  j.at("preset").get_to(c.preset);
  j.at("behaviors").get_to(c.behaviors);
  j.at("pedestrian_count").get_to(c.pedestrian_count);
  j.at("seed").get_to(c.seed);
  j.at("max_steps").get_to(c.max_steps);
  j.at("ego_start").get_to(c.ego_start);
  j.at("road").get_to(c.road);
}

}  // namespace pedplan::behaviors
