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

#ifndef PEDPLAN__ENGINE_HPP_
#define PEDPLAN__ENGINE_HPP_

#include "pedplan/behaviors.hpp"
#include "pedplan/config.hpp"
#include "pedplan/memory.hpp"
#include "pedplan/policy.hpp"
#include "pedplan/prompting.hpp"
#include "pedplan/trace.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pedplan::engine
{

/// Everything an episode needs besides the scenario and the policy.
struct RunSetup
{
  config::SimConfig sim;
  prompting::PromptTemplate prompt_template = prompting::PromptTemplate::builtin();
  /// Few-shot demonstrations are retrieved from this bank when set.
  std::shared_ptr<const memory::MemoryBank> memory;
};

/// World state plus the per-tick stepping rules. Shared by run_episode and replay.
class EpisodeSimulator
{
public:
  EpisodeSimulator(const behaviors::ScenarioConfig & scenario, const config::SimConfig & sim);

  const world::VehicleState & ego() const { return ego_; }
  std::vector<world::PedestrianState> pedestrians() const;
  int step() const { return step_; }
  int max_steps() const { return max_steps_; }
  bool done() const { return outcome_.has_value(); }
  std::optional<Outcome> outcome() const { return outcome_; }

  prompting::Observation observe() const;
  StepRecord initial_record() const;

  /// Converts `action` against the current state; it stays in force until the next call.
  const world::ActionCommand & apply(Action action, int cycle);
  /// Advances one tick and returns its record. Sets the outcome on termination.
  StepRecord tick();

private:
  StepRecord make_record() const;
  void update_outcome(const StepRecord & rec);

  behaviors::ScenarioConfig scenario_;
  config::SimConfig sim_;
  world::VehicleState ego_;
  std::vector<behaviors::PedestrianAgent> agents_;
  world::ActionCommand command_;
  int step_ = 0;
  int cycle_ = 0;
  int max_steps_ = 0;
  std::optional<Outcome> outcome_;
};

/// Runs one closed-loop episode. Configuration errors throw before step 0; policy failures
/// inside the episode become fallback decisions.
EpisodeTrace run_episode(
  const behaviors::ScenarioConfig & scenario, policy::DecisionPolicy & policy,
  const RunSetup & setup);

struct EpisodeResult
{
  std::uint64_t seed = 0;
  std::optional<EpisodeTrace> trace;
  std::string error;  // set when the episode aborted
};

using EpisodeCallback = std::function<void(const EpisodeResult &)>;

/// One result per seed, in seed-list order, independent of `parallelism`. `on_done` is called
/// once per finished episode, serialized, in completion order.
std::vector<EpisodeResult> run_batch(
  const std::string & preset, const std::vector<std::uint64_t> & seeds,
  policy::DecisionPolicy & policy, const RunSetup & setup, int parallelism,
  const EpisodeCallback & on_done = {});

struct LatencySummary
{
  bool empty = true;  // no decisions recorded
  std::size_t count = 0;
  double avg = 0.0;
  double max = 0.0;
  double min = 0.0;
  double std = 0.0;  // sample standard deviation
};

LatencySummary measure_latency(const std::vector<EpisodeTrace> & traces);
nlohmann::json to_json(const LatencySummary & summary);

struct ReplayOptions
{
  double tolerance = 1e-9;
  std::optional<double> dt_override;
};

struct ReplayReport
{
  bool verified = false;
  std::optional<int> divergent_step;
  std::string detail;
};

/// Re-simulates a trace from its scenario, config snapshot and decision sequence.
ReplayReport replay(const EpisodeTrace & trace, const ReplayOptions & options = {});

}  // namespace pedplan::engine

#endif  // PEDPLAN__ENGINE_HPP_
