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

#include "helpers.hpp"
#include "pedplan/policy.hpp"

#include <doctest.h>

#include <chrono>
#include <fstream>
#include <random>

using namespace pedplan;
using namespace pedplan::policy;

namespace
{

prompting::Observation observe(const world::VehicleState & ego, std::vector<world::PedestrianState> peds)
{
  prompting::WorldSnapshot s;
  s.ego = ego;
  s.pedestrians = std::move(peds);
  return prompting::build_observation(s);
}

DecisionContext context_for(const std::string & user, int index = 0)
{
  DecisionContext ctx;
  ctx.request.prompt.system_text = "system";
  ctx.request.prompt.scene_text = user;
  ctx.request.prompt.instruction_text = "Drive.";
  ctx.request.prompt.output_format_text = "Pick one.";
  ctx.decision_index = index;
  return ctx;
}

}  // namespace

TEST_SUITE("policy")
{
TEST_CASE("canonical names and digits")
{
  CHECK(parse_action("Stay Idle").action == Action::StayIdle);
  CHECK(parse_action("Turn Left").action == Action::TurnLeft);
  CHECK(parse_action("Turn Right").action == Action::TurnRight);
  CHECK(parse_action("Accelerate").action == Action::Accelerate);
  CHECK(parse_action("Decelerate").action == Action::Decelerate);
  for (int i = 0; i < 5; ++i) {
    const auto p = parse_action(std::to_string(i));
    CHECK(p.ok);
    CHECK(to_index(p.action) == i);
  }
  for (auto a : kAllActions) {
    const auto p = parse_action(action_name(a));
    CHECK(p.ok);
    CHECK(p.action == a);
  }
}

TEST_CASE("names win over digits, earliest name wins")
{
  CHECK(parse_action("Action 3: Decelerate").action == Action::Decelerate);
  CHECK(parse_action("I will ACCELERATE, not decelerate").action == Action::Accelerate);
  CHECK(parse_action("decelerate then accelerate").action == Action::Decelerate);
  CHECK(parse_action("**Turn Left** because the lane is free").action == Action::TurnLeft);
  CHECK(parse_action("Answer: 2").action == Action::TurnRight);
  CHECK(parse_action("slow down").action == Action::Decelerate);
}

TEST_CASE("numbers embedded in larger tokens are not actions")
{
  CHECK_FALSE(parse_action("speed 12 m/s").ok);
  CHECK_FALSE(parse_action("distance 3.5 m").ok);
  CHECK_FALSE(parse_action("v2x").ok);
  CHECK(parse_action("option 3.").action == Action::Accelerate);
}

TEST_CASE("no match falls back to a safe deceleration")
{
  for (const auto text : {"", "hmm", "I am not sure", "9", "lane", "42"}) {
    const auto p = parse_action(text);
    CHECK_FALSE(p.ok);
    CHECK(p.action == Action::Decelerate);
  }
  // Names inside a longer word are not matches.
  CHECK_FALSE(parse_action("unbraked").ok);
}

TEST_CASE("parser fuzz: total, deterministic, idempotent")
{
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(0, 64);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> pick(0, 5);
  const std::vector<std::string> words{"stay", "idle", "turn", "left", "decelerate", "4"};
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    const int n = len(rng);
    for (int j = 0; j < n; ++j) {
      if (byte(rng) < 16) {
        s += words[static_cast<std::size_t>(pick(rng))] + " ";
      } else {
        s.push_back(static_cast<char>(byte(rng)));
      }
    }
    const auto a = parse_action(s);
    const int idx = to_index(a.action);
    REQUIRE(idx >= 0);
    REQUIRE(idx <= 4);
    const auto b = parse_action(s);
    REQUIRE(a.action == b.action);
    REQUIRE(a.ok == b.ok);
    if (!a.ok) {
      REQUIRE(a.action == Action::Decelerate);
    }
    const auto again = parse_action(action_name(a.action));
    REQUIRE(again.action == a.action);
  }
}

TEST_CASE("fallback result")
{
  const auto r = fallback_result("garbled");
  CHECK(r.action == Action::Decelerate);
  CHECK_FALSE(r.parse_ok);
  CHECK(r.source == DecisionSource::Fallback);
  CHECK(r.raw_text == "garbled");
}

TEST_CASE("rule policy")
{
  const RuleParams params;
  const world::VehicleState slow{0.0, 4.8, 5.0, 0.0, 1};
  const world::VehicleState cruising{0.0, 4.8, 10.0, 0.0, 1};

  auto r = decide_rule(observe(slow, {}), params);
  CHECK(r.action == Action::Accelerate);
  CHECK(r.source == DecisionSource::Rule);
  CHECK(r.raw_text.rfind("Accelerate", 0) == 0);
  CHECK(parse_action(r.raw_text).action == r.action);

  r = decide_rule(observe(cruising, {}), params);
  CHECK(r.action == Action::StayIdle);
  CHECK(parse_action(r.raw_text).action == Action::StayIdle);

  // Pedestrian walking into the lane 20 m ahead: ttc about 1.8 s.
  r = decide_rule(observe(cruising, {{0, 20.0, 3.0, 0.0, 1.4, 0.3}}), params);
  CHECK(r.action == Action::Decelerate);
  CHECK(parse_action(r.raw_text).action == Action::Decelerate);

  // Standing just beside the vehicle: no ttc conflict, clearance below d_brake.
  r = decide_rule(observe(cruising, {{0, 1.0, 8.0, 0.0, 0.0, 0.3}}), params);
  CHECK(r.action == Action::Decelerate);

  // Pedestrians well behind are ignored.
  r = decide_rule(observe(cruising, {{0, -10.0, 4.8, 0.0, 0.0, 0.3}}), params);
  CHECK(r.action == Action::StayIdle);
}

TEST_CASE("mock policies")
{
  const auto constant = MockPolicy::constant(Action::TurnLeft);
  const auto r = constant->decide(context_for("x"));
  CHECK(r.action == Action::TurnLeft);
  CHECK(r.parse_ok);
  CHECK(r.source == DecisionSource::Mock);
  CHECK(constant->kind() == "mock");

  const auto scripted = MockPolicy::scripted({Action::Accelerate, Action::Decelerate});
  CHECK(scripted->decide(context_for("x", 0)).action == Action::Accelerate);
  CHECK(scripted->decide(context_for("x", 1)).action == Action::Decelerate);
  CHECK_THROWS_AS(scripted->decide(context_for("x", 2)), MockScriptExhausted);

  const auto fn = MockPolicy::from_function(
    [](const DecisionContext & c) { return c.decision_index % 2 ? Action::StayIdle : Action::Accelerate; });
  CHECK(fn->decide(context_for("x", 3)).action == Action::StayIdle);
}

TEST_CASE("mock delay")
{
  auto p = MockPolicy::constant(Action::StayIdle);
  p->set_delay(0.05);
  const auto start = std::chrono::steady_clock::now();
  p->decide(context_for("x"));
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(50));
}

TEST_CASE("request hash")
{
  const auto h = request_hash("system", "user");
  CHECK(h.size() == 64);
  CHECK(h == request_hash("system", "user"));
  CHECK(h != request_hash("systemu", "ser"));
  CHECK(h != request_hash("system", "user "));
  // printf 'a\x1eb' | sha256sum
  CHECK(request_hash("a", "b") == "d30a11ae896cfd9828c66c826156c80a42e6c401f767ced8dcde831b7a729bdc");
}

TEST_CASE("recording then replaying responses")
{
  testing::TempDir tmp;
  auto inner = MockPolicy::from_function([](const DecisionContext & c) {
    return c.request.prompt.scene_text == "left" ? Action::TurnLeft : Action::Accelerate;
  });
  RecordingPolicy recorder(*inner, tmp.path(), "mock-model");
  CHECK(recorder.kind() == "mock");
  recorder.decide(context_for("left"));
  recorder.decide(context_for("other"));
  recorder.decide(context_for("left"));
  CHECK(recorder.recorded() == 2);

  const auto ctx = context_for("left");
  const auto doc = nlohmann::json::parse(
    testing::read_file(fixture_path(tmp.path(), request_hash(ctx.request.prompt))));
  CHECK(doc.at("model") == "mock-model");
  CHECK(doc.at("response") == "Turn Left");

  RecordedPolicy replay(tmp.path());
  CHECK(replay.kind() == "recorded");
  const auto a = replay.decide(ctx);
  CHECK(a.action == Action::TurnLeft);
  CHECK(a.parse_ok);
  CHECK(replay.decide(context_for("other")).action == Action::Accelerate);

  const auto missing = replay.decide(context_for("never seen"));
  CHECK(missing.source == DecisionSource::Fallback);
  CHECK(missing.action == Action::Decelerate);

  CHECK_THROWS_AS(RecordedPolicy("/nonexistent/recorded"), ConfigError);
}

TEST_CASE("conflicting recorded responses are reported")
{
  testing::TempDir tmp;
  int calls = 0;
  auto inner = MockPolicy::from_function([&](const DecisionContext &) {
    return calls++ == 0 ? Action::Accelerate : Action::Decelerate;
  });
  RecordingPolicy recorder(*inner, tmp.path(), "m");
  recorder.decide(context_for("same"));
  CHECK_THROWS(recorder.decide(context_for("same")));
}

TEST_CASE("recorded response with malformed file")
{
  testing::TempDir tmp;
  const auto ctx = context_for("x");
  std::ofstream(fixture_path(tmp.path(), request_hash(ctx.request.prompt))) << "{not json";
  RecordedPolicy replay(tmp.path());
  CHECK_THROWS_AS(replay.decide(ctx), FormatError);
}
}
