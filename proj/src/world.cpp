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

#include "pedplan/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pedplan::world
{

int RoadGeometry::nearest_lane(double y) const
{
  const int lane = static_cast<int>(std::floor(y / lane_width));
  return std::clamp(lane, 0, lane_count - 1);
}

void RoadGeometry::validate() const
{
  if (lane_count < 1) {
    throw ConfigError("road: lane_count must be >= 1");
  }
  if (!(lane_width > 0.0)) {
    throw ConfigError("road: lane_width must be > 0");
  }
  if (!(length > 0.0)) {
    throw ConfigError("road: length must be > 0");
  }
}

double PedestrianState::speed() const { return std::hypot(vx, vy); }

void MotionPlannerConfig::validate() const
{
  if (!(dt > 0.0)) {
    throw ConfigError("motion: dt must be > 0");
  }
  if (!(a_max > 0.0)) {
    throw ConfigError("motion: a_max must be > 0");
  }
  if (!(k_theta > 0.0 && k_theta <= 1.0)) {
    throw ConfigError("motion: k_theta must be in (0, 1]");
  }
  if (!(v_max > 0.0)) {
    throw ConfigError("motion: v_max must be > 0");
  }
  if (speed_step < 0.0) {
    throw ConfigError("motion: speed_step must be >= 0");
  }
  if (!(vehicle_length > 0.0 && vehicle_width > 0.0)) {
    throw ConfigError("motion: vehicle dimensions must be > 0");
  }
  if (!(lookahead > 0.0)) {
    throw ConfigError("motion: lookahead must be > 0");
  }
  if (!(max_heading > 0.0 && max_heading < std::numbers::pi / 2)) {
    throw ConfigError("motion: max_heading must be in (0, pi/2)");
  }
}

double wrap_angle(double theta)
{
  constexpr double pi = std::numbers::pi;
  if (theta > -pi && theta <= pi) {
    return theta;
  }
  double wrapped = std::fmod(theta + pi, 2.0 * pi);
  if (wrapped <= 0.0) {
    wrapped += 2.0 * pi;
  }
  return wrapped - pi;
}

VehicleState step_vehicle(
  const VehicleState & state, const ActionCommand & cmd, const MotionPlannerConfig & cfg,
  const RoadGeometry & road)
{
  cfg.validate();
  const double a = std::clamp((cmd.v_target - state.v) / cfg.dt, -cfg.a_max, cfg.a_max);

  VehicleState next;
  next.x = state.x + state.v * std::cos(state.theta) * cfg.dt;
  next.y = std::clamp(state.y + state.v * std::sin(state.theta) * cfg.dt, 0.0, road.width());
  next.theta = wrap_angle(state.theta + cfg.k_theta * (cmd.theta_target - state.theta));
  next.v = std::clamp(state.v + a * cfg.dt, 0.0, cfg.v_max);
  next.lane = road.nearest_lane(next.y);
  return next;
}

namespace
{

double heading_toward(double target_y, const VehicleState & state, const MotionPlannerConfig & cfg)
{
  return std::clamp(
    std::atan2(target_y - state.y, cfg.lookahead), -cfg.max_heading, cfg.max_heading);
}

}  // namespace

ActionCommand action_to_command(
  Action action, const VehicleState & state, const RoadGeometry & road,
  const MotionPlannerConfig & cfg)
{
  ActionCommand cmd;
  cmd.action = action;
  cmd.v_target = std::clamp(state.v, 0.0, cfg.v_max);

  int target_lane = state.lane;
  switch (action) {
    case Action::StayIdle:
      break;
    case Action::Accelerate:
      cmd.v_target = std::min(state.v + cfg.speed_step, cfg.v_max);
      break;
    case Action::Decelerate:
      cmd.v_target = std::clamp(state.v - cfg.speed_step, 0.0, cfg.v_max);
      break;
    case Action::TurnLeft:
      if (state.lane + 1 < road.lane_count) {
        target_lane = state.lane + 1;
      } else {
        cmd.degraded = true;
      }
      break;
    case Action::TurnRight:
      if (state.lane > 0) {
        target_lane = state.lane - 1;
      } else {
        cmd.degraded = true;
      }
      break;
  }
  cmd.theta_target = heading_toward(road.lane_center(target_lane), state, cfg);
  return cmd;
}

double min_distance(
  const VehicleState & ego, const PedestrianState & ped, const MotionPlannerConfig & cfg)
{
  // Pedestrian center expressed in the vehicle body frame.
  const double rx = ped.x - ego.x;
  const double ry = ped.y - ego.y;
  const double c = std::cos(ego.theta);
  const double s = std::sin(ego.theta);
  const double lon = c * rx + s * ry;
  const double lat = -s * rx + c * ry;

  const double ex = std::max(std::abs(lon) - 0.5 * cfg.vehicle_length, 0.0);
  const double ey = std::max(std::abs(lat) - 0.5 * cfg.vehicle_width, 0.0);
  return std::max(std::hypot(ex, ey) - ped.radius, 0.0);
}

double min_lateral_distance(
  const VehicleState & ego, const PedestrianState & ped, const MotionPlannerConfig & cfg)
{
  return std::max(std::abs(ped.y - ego.y) - 0.5 * cfg.vehicle_width - ped.radius, 0.0);
}

double compute_ttc(const VehicleState & ego, const PedestrianState & ped, double conflict_radius)
{
  const double px = ped.x - ego.x;
  const double py = ped.y - ego.y;
  const double wx = ped.vx - ego.v * std::cos(ego.theta);
  const double wy = ped.vy - ego.v * std::sin(ego.theta);

  // |p + w t|^2 = R^2  ->  a t^2 + b t + c = 0
  const double c = px * px + py * py - conflict_radius * conflict_radius;
  if (c <= 0.0) {
    return 0.0;
  }
  const double a = wx * wx + wy * wy;
  const double b = 2.0 * (px * wx + py * wy);
  if (a == 0.0 || b >= 0.0) {
    // Not closing in.
    return kNoConflict;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return kNoConflict;
  }
  // Numerically stable smaller root: c > 0 and b < 0 make both roots positive.
  const double q = -0.5 * (b - std::sqrt(disc));
  return c / q;
}

bool check_collision(
  const VehicleState & ego, std::span<const PedestrianState> peds, const MotionPlannerConfig & cfg)
{
  return std::any_of(peds.begin(), peds.end(), [&](const PedestrianState & p) {
    return min_distance(ego, p, cfg) == 0.0;
  });
}

}  // namespace pedplan::world
