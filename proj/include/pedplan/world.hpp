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

#ifndef PEDPLAN__WORLD_HPP_
#define PEDPLAN__WORLD_HPP_

#include "pedplan/common.hpp"

#include <limits>
#include <span>

// Road, ego vehicle and pedestrian bodies: kinematics, footprint geometry and
// time-to-collision. Everything here is a pure function of its arguments.
namespace pedplan::world
{

/// Straight multi-lane road along +x. Lane 0 is the rightmost lane (lowest y);
/// the road spans y in [0, lane_count * lane_width].
struct RoadGeometry
{
  int lane_count = 3;
  double lane_width = 3.2;
  double length = 200.0;

  double width() const { return lane_count * lane_width; }
  double lane_center(int lane) const { return (lane + 0.5) * lane_width; }
  int nearest_lane(double y) const;
  void validate() const;

  bool operator==(const RoadGeometry &) const = default;
};

struct VehicleState
{
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double theta = 0.0;
  int lane = 0;

  bool operator==(const VehicleState &) const = default;
};

struct PedestrianState
{
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double radius = 0.3;

  double speed() const;
  bool operator==(const PedestrianState &) const = default;
};

struct MotionPlannerConfig
{
  double dt = 0.1;             // integration step [s]
  double a_max = 3.0;          // [m/s^2]
  double k_theta = 0.2;        // heading gain, applied once per step
  double v_max = 13.89;        // [m/s]
  double speed_step = 2.5;     // v_target increment for Accelerate/Decelerate [m/s]
  double vehicle_length = 5.0;
  double vehicle_width = 1.8;
  double lookahead = 10.0;     // longitudinal distance used to aim at a lane center [m]
  double max_heading = 0.35;   // |theta_target| bound [rad]

  void validate() const;
  bool operator==(const MotionPlannerConfig &) const = default;
};

struct ActionCommand
{
  Action action = Action::StayIdle;
  double v_target = 0.0;
  double theta_target = 0.0;
  // Set when a lane change was requested at the road edge and degraded to lane keeping.
  bool degraded = false;

  bool operator==(const ActionCommand &) const = default;
};

/// Sentinel returned by compute_ttc when the two bodies never come within the conflict radius.
inline constexpr double kNoConflict = std::numeric_limits<double>::infinity();

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// One integration step of the point-kinematic model with clamped acceleration.
/// The lane index is recomputed from the new y, and y is clamped to the road.
VehicleState step_vehicle(
  const VehicleState & state, const ActionCommand & cmd, const MotionPlannerConfig & cfg,
  const RoadGeometry & road);

ActionCommand action_to_command(
  Action action, const VehicleState & state, const RoadGeometry & road,
  const MotionPlannerConfig & cfg);

/// Distance between the pedestrian disc and the ego's oriented rectangular footprint; 0 on overlap.
double min_distance(
  const VehicleState & ego, const PedestrianState & ped, const MotionPlannerConfig & cfg);

/// Road-normal clearance between the ego body edge and the pedestrian disc, floored at 0.
double min_lateral_distance(
  const VehicleState & ego, const PedestrianState & ped, const MotionPlannerConfig & cfg);

/// Earliest t >= 0 at which the constant-velocity projections of the two centers come within
/// `conflict_radius`, or kNoConflict.
double compute_ttc(const VehicleState & ego, const PedestrianState & ped, double conflict_radius);

bool check_collision(
  const VehicleState & ego, std::span<const PedestrianState> peds, const MotionPlannerConfig & cfg);

}  // namespace pedplan::world

#endif  // PEDPLAN__WORLD_HPP_
