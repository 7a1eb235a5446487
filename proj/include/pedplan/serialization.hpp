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

#ifndef PEDPLAN__SERIALIZATION_HPP_
#define PEDPLAN__SERIALIZATION_HPP_

// nlohmann adapters for the plain value types shared across modules.

#include "pedplan/behaviors.hpp"
#include "pedplan/world.hpp"

#include <json.hpp>

namespace pedplan
{

/// Doubles that may be infinite travel as the string "inf".
nlohmann::json number_or_inf(double value);
double number_or_inf_from(const nlohmann::json & j);

}  // namespace pedplan

namespace pedplan::world
{
void to_json(nlohmann::json & j, const RoadGeometry & r);
void from_json(const nlohmann::json & j, RoadGeometry & r);
void to_json(nlohmann::json & j, const VehicleState & s);
void from_json(const nlohmann::json & j, VehicleState & s);
void to_json(nlohmann::json & j, const PedestrianState & p);
void from_json(const nlohmann::json & j, PedestrianState & p);
void to_json(nlohmann::json & j, const MotionPlannerConfig & c);
void from_json(const nlohmann::json & j, MotionPlannerConfig & c);
void to_json(nlohmann::json & j, const ActionCommand & c);
void from_json(const nlohmann::json & j, ActionCommand & c);
}  // namespace pedplan::world

namespace pedplan::behaviors
{
void to_json(nlohmann::json & j, const BehaviorParams & p);
void from_json(const nlohmann::json & j, BehaviorParams & p);
void to_json(nlohmann::json & j, const PedestrianSpec & s);
void from_json(const nlohmann::json & j, PedestrianSpec & s);
void to_json(nlohmann::json & j, const ScenarioConfig & c);
void from_json(const nlohmann::json & j, ScenarioConfig & c);
}  // namespace pedplan::behaviors

#endif  // PEDPLAN__SERIALIZATION_HPP_
