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

// Regenerates the offline fixtures: rule-policy traces and memory banks, and recorded responses
// of a synthetic language-model stand-in for the experiment conditions.

#include "pedplan/cli.hpp"
#include "pedplan/config.hpp"
#include "pedplan/engine.hpp"
#include "pedplan/memory.hpp"
#include "pedplan/policy.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

namespace
{

namespace fs = std::filesystem;
using namespace pedplan;

struct BankTarget
{
  std::string preset;
  std::size_t entries;
};

/// Stand-in for a small instruction-following model: brakes late on its own and earlier the
/// more retrieved demonstrations say Decelerate. It only reads what the prompt shows.
class SyntheticResponder : public policy::DecisionPolicy
{
public:
  policy::DecisionResult decide(const policy::DecisionContext & ctx) override
  {
    policy::RuleParams params;
    params.ttc_brake = 1.5;
    params.d_brake = 1.0;
    const auto demos = std::count(
      ctx.retrieved_actions.begin(), ctx.retrieved_actions.end(), Action::Decelerate);
    params.ttc_brake += 0.75 * static_cast<double>(demos);
    auto r = policy::decide_rule(ctx.observation, params);
    r.source = DecisionSource::Mock;
    return r;
  }
  std::string kind() const override { return "synthetic"; }
};

std::size_t bank_contribution(const engine::EpisodeTrace & trace, const config::SimConfig & sim)
{
  const engine::EpisodeTrace one[] = {trace};
  return memory::build_bank(one, sim.memory.build_config(sim.ttc_conflict_radius)).size();
}

/// Earliest-seed subset of `counts` summing exactly to `target`.
bool pick(
  const std::vector<std::pair<std::uint64_t, std::size_t>> & counts, std::size_t start,
  std::size_t target, std::vector<std::uint64_t> & chosen)
{
  if (target == 0) {
    return true;
  }
  for (std::size_t i = start; i < counts.size(); ++i) {
    if (counts[i].second == 0 || counts[i].second > target) {
      continue;
    }
    chosen.push_back(counts[i].first);
    if (pick(counts, i + 1, target - counts[i].second, chosen)) {
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

void generate_bank(
  const BankTarget & target, const engine::RunSetup & setup, const fs::path & fixture_dir,
  const fs::path & data_dir)
{
  policy::RulePolicy rule(setup.sim.rule);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1000; s < 1040; ++s) {
    seeds.push_back(s);
  }
  const auto results = engine::run_batch(target.preset, seeds, rule, setup, 1);
  std::vector<std::pair<std::uint64_t, std::size_t>> counts;
  std::map<std::uint64_t, engine::EpisodeTrace> by_seed;
  for (const auto & r : results) {
    if (!r.trace) {
      throw std::runtime_error(r.error);
    }
    const auto n = r.trace->outcome == Outcome::Success ? bank_contribution(*r.trace, setup.sim) : 0;
    counts.emplace_back(r.seed, n);
    by_seed.emplace(r.seed, *r.trace);
  }
  std::vector<std::uint64_t> chosen;
  if (!pick(counts, 0, target.entries, chosen)) {
    throw std::runtime_error("no seed subset reaches the requested bank size");
  }

  const auto dir = fixture_dir / "traces" / target.preset;
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<engine::EpisodeTrace> traces;
  for (auto seed : chosen) {
    auto trace = by_seed.at(seed);
    for (auto & d : trace.decisions) {
      d.latency_s = 0.0;
    }
    engine::write_trace(trace, dir / fmt::format("{}.json", seed));
    traces.push_back(trace);
  }
  const auto bank =
    memory::build_bank(traces, setup.sim.memory.build_config(setup.sim.ttc_conflict_radius));
  fs::create_directories(data_dir / "banks");
  memory::save(bank, data_dir / "banks" / (target.preset + ".jsonl"));
  std::cout << fmt::format(
    "{}: seeds [{}] -> {} entries\n", target.preset, fmt::join(chosen, ", "), bank.size());
}

void generate_recorded(
  const engine::RunSetup & base, const fs::path & fixture_dir, const fs::path & data_dir)
{
  const std::vector<std::string> conditions = {
    "exp2_zero", "exp2_memory", "exp4_turn_back", "exp4_hesitation", "exp4_bidirectional"};
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 50; ++s) {
    seeds.push_back(s);
  }

  nlohmann::json expected = nlohmann::json::object();
  for (const auto & name : conditions) {
    pedplan::cli::Condition cond;
    for (const auto & exp : {"exp2", "exp4"}) {
      for (const auto & c : pedplan::cli::recipe(exp)) {
        if (c.name == name) {
          cond = c;
        }
      }
    }
    engine::RunSetup setup = base;
    if (cond.bank) {
      setup.memory = std::make_shared<memory::MemoryBank>(
        memory::load(data_dir / "banks" / (*cond.bank + ".jsonl")));
    }
    const auto dir = fixture_dir / "recorded" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    SyntheticResponder responder;
    policy::RecordingPolicy recorder(responder, dir, "synthetic-responder");
    const auto results = engine::run_batch(cond.preset, seeds, recorder, setup, 1);

    int successes = 0;
    int collisions = 0;
    int timeouts = 0;
    auto outcomes = nlohmann::json::object();
    for (const auto & r : results) {
      if (!r.trace) {
        throw std::runtime_error(r.error);
      }
      switch (r.trace->outcome) {
        case Outcome::Success:
          ++successes;
          break;
        case Outcome::Collision:
          ++collisions;
          break;
        case Outcome::Timeout:
          ++timeouts;
          break;
      }
      outcomes[std::to_string(r.seed)] = outcome_name(r.trace->outcome);
    }
    expected[name] = {
      {"preset", cond.preset},
      {"bank", cond.bank ? nlohmann::json(*cond.bank) : nlohmann::json()},
      {"seeds", seeds},
      {"successes", successes},
      {"collisions", collisions},
      {"timeouts", timeouts},
      {"outcomes", outcomes},
    };
    std::cout << fmt::format(
      "{}: {} responses, {}/{} successes\n", name, recorder.recorded(), successes, seeds.size());
  }
  std::ofstream out(fixture_dir / "recorded" / "expected_outcomes.json");
  out << expected.dump(2) << "\n";
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Regenerate offline fixtures", "pedplan_fixturegen"};
  std::string fixture_dir;
  std::string data_dir;
  app.add_option("--fixtures", fixture_dir, "Fixture root")->required();
  app.add_option("--data", data_dir, "Data root (memory banks)")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    engine::RunSetup setup;
    generate_bank({"turn_back", 114}, setup, fixture_dir, data_dir);
    generate_bank({"single_cross", 82}, setup, fixture_dir, data_dir);
    generate_recorded(setup, fixture_dir, data_dir);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
