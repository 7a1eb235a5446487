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

#ifndef PEDPLAN__POLICY_HPP_
#define PEDPLAN__POLICY_HPP_

#include "pedplan/prompting.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

// Decision-making layer: one contract, several ways of producing a tactical action.
namespace pedplan::policy
{

struct DecisionRequest
{
  prompting::PromptBundle prompt;
  double deadline_s = 30.0;
  std::string request_id;
};

struct DecisionContext
{
  DecisionRequest request;
  prompting::Observation observation;
  int decision_index = 0;
  std::vector<Action> retrieved_actions;  // actions of the few-shot demonstrations, in order
};

struct DecisionResult
{
  Action action = kSafetyFallback;
  std::string raw_text;
  bool parse_ok = false;
  double latency_s = 0.0;
  DecisionSource source = DecisionSource::Fallback;
};

/// Implementations must accept concurrent decide() calls.
class DecisionPolicy
{
public:
  virtual ~DecisionPolicy() = default;
  virtual DecisionResult decide(const DecisionContext & ctx) = 0;
  virtual std::string kind() const = 0;
};

struct ParsedAction
{
  Action action = kSafetyFallback;
  bool ok = false;
};

/// Maps free text to an action. Action names (and their synonyms) take precedence over bare
/// digits 0-4; among names the earliest occurrence wins. No match -> {Decelerate, false}.
ParsedAction parse_action(std::string_view text);

DecisionResult fallback_result(std::string raw_text);

// --- rule-based baseline -------------------------------------------------------------------

struct RuleParams
{
  double ttc_brake = 4.0;      // [s]
  double d_brake = 3.0;        // footprint clearance [m]
  double cruise_speed = 10.0;  // [m/s]
  double behind_margin = 3.0;  // pedestrians further behind than this are ignored [m]

  bool operator==(const RuleParams &) const = default;
};

DecisionResult decide_rule(const prompting::Observation & obs, const RuleParams & params);

class RulePolicy : public DecisionPolicy
{
public:
  explicit RulePolicy(RuleParams params = {}) : params_(params) {}
  DecisionResult decide(const DecisionContext & ctx) override;
  std::string kind() const override { return "rule"; }

private:
  RuleParams params_;
};

// --- scripted mock -------------------------------------------------------------------------

class MockScriptExhausted : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

DecisionResult decide_mock(std::span<const Action> script, int decision_index);

class MockPolicy : public DecisionPolicy
{
public:
  using ActionFn = std::function<Action(const DecisionContext &)>;

  static std::unique_ptr<MockPolicy> constant(Action action);
  static std::unique_ptr<MockPolicy> scripted(std::vector<Action> script);
  static std::unique_ptr<MockPolicy> from_function(ActionFn fn);

  /// Artificial per-call delay, used to emulate inference latency.
  void set_delay(double seconds) { delay_s_ = seconds; }

  DecisionResult decide(const DecisionContext & ctx) override;
  std::string kind() const override { return "mock"; }

private:
  MockPolicy() = default;
  std::vector<Action> script_;
  ActionFn fn_;
  double delay_s_ = 0.0;
};

// --- recorded responses --------------------------------------------------------------------

/// SHA-256 (hex) of a request's system and user messages. Names recorded-response files.
std::string request_hash(std::string_view system_text, std::string_view user_text);
std::string request_hash(const prompting::PromptBundle & prompt);

std::filesystem::path fixture_path(const std::filesystem::path & dir, const std::string & hash);

/// Canned response text stored for `hash`, or nullopt when the directory has none.
std::optional<std::string> read_recorded_response(
  const std::filesystem::path & dir, const std::string & hash);

/// Replays responses recorded under `dir` (one JSON file per request hash). A missing response
/// degrades to the safety fallback.
class RecordedPolicy : public DecisionPolicy
{
public:
  explicit RecordedPolicy(std::filesystem::path dir);
  DecisionResult decide(const DecisionContext & ctx) override;
  std::string kind() const override { return "recorded"; }

private:
  std::filesystem::path dir_;
};

/// Wraps another policy and stores each of its responses under `dir`, keyed by request hash.
class RecordingPolicy : public DecisionPolicy
{
public:
  RecordingPolicy(DecisionPolicy & inner, std::filesystem::path dir, std::string model_name);
  DecisionResult decide(const DecisionContext & ctx) override;
  std::string kind() const override { return inner_.kind(); }
  std::size_t recorded() const { return recorded_.load(); }

private:
  DecisionPolicy & inner_;
  std::filesystem::path dir_;
  std::string model_name_;
  std::mutex mutex_;
  std::atomic<std::size_t> recorded_{0};
};

}  // namespace pedplan::policy

#endif  // PEDPLAN__POLICY_HPP_
