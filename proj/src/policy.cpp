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

#include "pedplan/policy.hpp"

#include "pedplan/hash.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace pedplan::policy
{

namespace
{

struct NameToken
{
  std::string_view text;
  Action action;
};

constexpr std::array<NameToken, 9> kNameTokens{{
  {"stay idle", Action::StayIdle},
  {"idle", Action::StayIdle},
  {"turn left", Action::TurnLeft},
  {"turn right", Action::TurnRight},
  {"accelerate", Action::Accelerate},
  {"speed up", Action::Accelerate},
  {"decelerate", Action::Decelerate},
  {"slow down", Action::Decelerate},
  {"brake", Action::Decelerate},
}};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

ParsedAction parse_action(std::string_view text)
{
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });

  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  Action best = kSafetyFallback;
  for (const auto & token : kNameTokens) {
    std::size_t pos = lower.find(token.text);
    while (pos != std::string::npos) {
      if (pos == 0 || !is_alpha(lower[pos - 1])) {
        if (pos < best_pos || (pos == best_pos && token.text.size() > best_len)) {
          best_pos = pos;
          best_len = token.text.size();
          best = token.action;
        }
        break;
      }
      pos = lower.find(token.text, pos + 1);
    }
  }
  if (best_pos != std::string::npos) {
    return {best, true};
  }

  // Bare digit: a lone 0-4 that is not part of a larger number or word.
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const char c = lower[i];
    if (c < '0' || c > '4') {
      continue;
    }
    const bool left_ok = i == 0 || !(is_alnum(lower[i - 1]) || lower[i - 1] == '.');
    bool right_ok = i + 1 == lower.size() || !is_alnum(lower[i + 1]);
    if (right_ok && i + 1 < lower.size() && lower[i + 1] == '.') {
      right_ok = i + 2 >= lower.size() || !is_digit(lower[i + 2]);
    }
    if (left_ok && right_ok) {
      return {static_cast<Action>(c - '0'), true};
    }
  }
  return {kSafetyFallback, false};
}

DecisionResult fallback_result(std::string raw_text)
{
  DecisionResult r;
  r.action = kSafetyFallback;
  r.raw_text = std::move(raw_text);
  r.parse_ok = false;
  r.source = DecisionSource::Fallback;
  return r;
}

// --- rule ----------------------------------------------------------------------------------

DecisionResult decide_rule(const prompting::Observation & obs, const RuleParams & params)
{
  const prompting::PedestrianView * by_ttc = nullptr;
  const prompting::PedestrianView * by_distance = nullptr;
  for (const auto & p : obs.derived) {
    if (p.dx < -params.behind_margin) {
      continue;
    }
    if (!by_ttc || p.ttc < by_ttc->ttc) {
      by_ttc = &p;
    }
    if (!by_distance || p.distance < by_distance->distance) {
      by_distance = &p;
    }
  }

  DecisionResult r;
  r.source = DecisionSource::Rule;
  r.parse_ok = true;
  const double v = obs.ego_view.v;
  if (by_ttc && by_ttc->ttc < params.ttc_brake) {
    r.action = Action::Decelerate;
    r.raw_text = fmt::format(
      "Decelerate. Pedestrian {} is {:.2f} m ahead with time-to-collision {:.2f} s, so I slow "
      "down to yield.",
      by_ttc->id, by_ttc->dx, by_ttc->ttc);
  } else if (by_distance && by_distance->distance < params.d_brake) {
    r.action = Action::Decelerate;
    r.raw_text = fmt::format(
      "Decelerate. Pedestrian {} is only {:.2f} m from the vehicle, so I slow down to keep a "
      "safe gap.",
      by_distance->id, by_distance->distance);
  } else if (v < params.cruise_speed) {
    r.action = Action::Accelerate;
    r.raw_text = fmt::format(
      "Accelerate. No pedestrian is in conflict with my path and {:.2f} m/s is below the "
      "{:.2f} m/s cruise speed.",
      v, params.cruise_speed);
  } else {
    r.action = Action::StayIdle;
    r.raw_text = "Stay Idle. The path is clear and the vehicle is at cruise speed.";
  }
  return r;
}

DecisionResult RulePolicy::decide(const DecisionContext & ctx)
{
  return decide_rule(ctx.observation, params_);
}

// --- mock ----------------------------------------------------------------------------------

DecisionResult decide_mock(std::span<const Action> script, int decision_index)
{
  if (decision_index < 0 || static_cast<std::size_t>(decision_index) >= script.size()) {
    throw MockScriptExhausted(
      "mock script has " + std::to_string(script.size()) + " actions, decision " +
      std::to_string(decision_index) + " requested");
  }
  DecisionResult r;
  r.action = script[static_cast<std::size_t>(decision_index)];
  r.raw_text = std::string(action_name(r.action));
  r.parse_ok = true;
  r.source = DecisionSource::Mock;
  return r;
}

std::unique_ptr<MockPolicy> MockPolicy::constant(Action action)
{
  return from_function([action](const DecisionContext &) { return action; });
}

std::unique_ptr<MockPolicy> MockPolicy::scripted(std::vector<Action> script)
{
  std::unique_ptr<MockPolicy> p(new MockPolicy());
  p->script_ = std::move(script);
  return p;
}

std::unique_ptr<MockPolicy> MockPolicy::from_function(ActionFn fn)
{
  std::unique_ptr<MockPolicy> p(new MockPolicy());
  p->fn_ = std::move(fn);
  return p;
}

DecisionResult MockPolicy::decide(const DecisionContext & ctx)
{
  if (delay_s_ > 0.0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(delay_s_));
  }
  if (fn_) {
    DecisionResult r;
    r.action = fn_(ctx);
    r.raw_text = std::string(action_name(r.action));
    r.parse_ok = true;
    r.source = DecisionSource::Mock;
    return r;
  }
  return decide_mock(script_, ctx.decision_index);
}

// --- recorded ------------------------------------------------------------------------------

std::string request_hash(std::string_view system_text, std::string_view user_text)
{
  std::string payload;
  payload.reserve(system_text.size() + user_text.size() + 1);
  payload.append(system_text);
  payload.push_back('\x1e');
  payload.append(user_text);
  return sha256_hex(payload);
}

std::string request_hash(const prompting::PromptBundle & prompt)
{
  return request_hash(prompt.system_text, prompt.user_text());
}

std::filesystem::path fixture_path(const std::filesystem::path & dir, const std::string & hash)
{
  return dir / (hash + ".json");
}

std::optional<std::string> read_recorded_response(
  const std::filesystem::path & dir, const std::string & hash)
{
  std::ifstream in(fixture_path(dir, hash), std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  try {
    const auto doc = nlohmann::json::parse(in);
    return doc.at("response").get<std::string>();
  } catch (const nlohmann::json::exception & e) {
    throw FormatError("recorded response " + hash + ": " + e.what());
  }
}

RecordedPolicy::RecordedPolicy(std::filesystem::path dir) : dir_(std::move(dir))
{
  if (!std::filesystem::is_directory(dir_)) {
    throw ConfigError("recorded-response directory does not exist: " + dir_.string());
  }
}

DecisionResult RecordedPolicy::decide(const DecisionContext & ctx)
{
  const auto hash = request_hash(ctx.request.prompt);
  const auto text = read_recorded_response(dir_, hash);
  if (!text) {
    return fallback_result("no recorded response for request " + hash);
  }
  const auto parsed = parse_action(*text);
  if (!parsed.ok) {
    return fallback_result(*text);
  }
  DecisionResult r;
  r.action = parsed.action;
  r.raw_text = *text;
  r.parse_ok = true;
  r.source = DecisionSource::Llm;
  return r;
}

RecordingPolicy::RecordingPolicy(
  DecisionPolicy & inner, std::filesystem::path dir, std::string model_name)
: inner_(inner), dir_(std::move(dir)), model_name_(std::move(model_name))
{
  std::filesystem::create_directories(dir_);
}

DecisionResult RecordingPolicy::decide(const DecisionContext & ctx)
{
  auto result = inner_.decide(ctx);
  const auto hash = request_hash(ctx.request.prompt);
  const auto path = fixture_path(dir_, hash);

  std::lock_guard lock(mutex_);
  if (const auto existing = read_recorded_response(dir_, hash)) {
    if (*existing != result.raw_text) {
      throw std::runtime_error("conflicting responses recorded for request " + hash);
    }
    return result;
  }
  const nlohmann::json doc = {
    {"request_hash", hash}, {"model", model_name_}, {"response", result.raw_text}};
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
  ++recorded_;
  return result;
}

}  // namespace pedplan::policy
