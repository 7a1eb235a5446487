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

#include "pedplan/common.hpp"

#include <algorithm>
#include <cctype>

namespace pedplan
{

namespace
{

constexpr std::array<std::string_view, 5> kActionNames{
  "Stay Idle", "Turn Left", "Turn Right", "Accelerate", "Decelerate"};

bool iequals(std::string_view a, std::string_view b)
{
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view action_name(Action a) { return kActionNames.at(static_cast<std::size_t>(a)); }

std::optional<Action> action_from_index(int index)
{
  if (index < 0 || index > 4) {
    return std::nullopt;
  }
  return static_cast<Action>(index);
}

std::optional<Action> action_from_name(std::string_view name)
{
  for (Action a : kAllActions) {
    if (iequals(name, action_name(a))) {
      return a;
    }
  }
  return std::nullopt;
}

std::string_view source_name(DecisionSource s)
{
  switch (s) {
    case DecisionSource::Llm:
      return "llm";
    case DecisionSource::Mock:
      return "mock";
    case DecisionSource::Rule:
      return "rule";
    case DecisionSource::Fallback:
      return "fallback";
  }
  return "fallback";
}

std::optional<DecisionSource> source_from_name(std::string_view name)
{
  for (auto s : {DecisionSource::Llm, DecisionSource::Mock, DecisionSource::Rule,
                 DecisionSource::Fallback}) {
    if (name == source_name(s)) {
      return s;
    }
  }
  return std::nullopt;
}

std::string_view outcome_name(Outcome o)
{
  switch (o) {
    case Outcome::Success:
      return "success";
    case Outcome::Collision:
      return "collision";
    case Outcome::Timeout:
      return "timeout";
  }
  return "timeout";
}

std::optional<Outcome> outcome_from_name(std::string_view name)
{
  for (auto o : {Outcome::Success, Outcome::Collision, Outcome::Timeout}) {
    if (name == outcome_name(o)) {
      return o;
    }
  }
  return std::nullopt;
}

}  // namespace pedplan
