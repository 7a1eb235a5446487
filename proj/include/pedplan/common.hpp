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

#ifndef PEDPLAN__COMMON_HPP_
#define PEDPLAN__COMMON_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pedplan
{

/// Invalid or inconsistent configuration detected before a run starts.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// File-system or persistence failure.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A persisted document could not be decoded. `line()` is 1-based, 0 when not line oriented.
class FormatError : public std::runtime_error
{
public:
  FormatError(const std::string & what, std::size_t line = 0)
  : std::runtime_error(what), line_(line)
  {
  }
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Discrete tactical action space. The integer values are part of the wire contract.
enum class Action : int {
  StayIdle = 0,
  TurnLeft = 1,
  TurnRight = 2,
  Accelerate = 3,
  Decelerate = 4,
};

inline constexpr std::array<Action, 5> kAllActions{
  Action::StayIdle, Action::TurnLeft, Action::TurnRight, Action::Accelerate, Action::Decelerate};

/// Fail-safe action used whenever a decision cannot be obtained or parsed.
inline constexpr Action kSafetyFallback = Action::Decelerate;

constexpr int to_index(Action a) { return static_cast<int>(a); }

std::string_view action_name(Action a);
std::optional<Action> action_from_index(int index);
std::optional<Action> action_from_name(std::string_view name);

enum class DecisionSource { Llm, Mock, Rule, Fallback };

std::string_view source_name(DecisionSource s);
std::optional<DecisionSource> source_from_name(std::string_view name);

enum class Outcome { Success, Collision, Timeout };

std::string_view outcome_name(Outcome o);
std::optional<Outcome> outcome_from_name(std::string_view name);

}  // namespace pedplan

#endif  // PEDPLAN__COMMON_HPP_
