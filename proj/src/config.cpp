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

#include "pedplan/config.hpp"

#include "pedplan/hash.hpp"
#include "pedplan/serialization.hpp"

#include <cstdlib>
#include <fstream>

#ifndef PEDPLAN_DEFAULT_DATA_DIR
#define PEDPLAN_DEFAULT_DATA_DIR "data"
#endif

namespace pedplan::engine
{

void EngineConfig::validate() const
{
  if (horizon_steps < 1) {
    throw ConfigError("engine: horizon_steps must be >= 1");
  }
  if (max_steps < 1) {
    throw ConfigError("engine: max_steps must be >= 1");
  }
  if (pipeline_depth != 0 && pipeline_depth != 1) {
    throw ConfigError("engine: pipeline_depth must be 0 or 1");
  }
  if (tick_wall_time < 0.0) {
    throw ConfigError("engine: tick_wall_time must be >= 0");
  }
  if (!(decision_deadline > 0.0)) {
    throw ConfigError("engine: decision_deadline must be > 0");
  }
}

}  // namespace pedplan::engine

namespace pedplan::config
{

memory::BankBuildConfig MemorySettings::build_config(double conflict_radius) const
{
  memory::BankBuildConfig c;
  c.retrieval = retrieval;
  c.attention_radius = attention_radius;
  c.ttc_cap = ttc_cap;
  c.conflict_radius = conflict_radius;
  return c;
}

void SimConfig::validate() const
{
  road.validate();
  motion.validate();
  pedestrian.validate();
  memory.retrieval.validate();
  llm.validate();
  engine.validate();
  if (!(ttc_conflict_radius > 0.0)) {
    throw ConfigError("ttc_conflict_radius must be > 0");
  }
  if (!(speed_limit > 0.0)) {
    throw ConfigError("speed_limit must be > 0");
  }
  if (memory.k < 1) {
    throw ConfigError("memory: k must be >= 1");
  }
  if (!(memory.ttc_cap > 0.0 && memory.attention_radius > 0.0)) {
    throw ConfigError("memory: ttc_cap and attention_radius must be > 0");
  }
  if (!(ego_start.v >= 0.0 && ego_start.v <= motion.v_max)) {
    throw ConfigError("ego_start: speed must lie in [0, v_max]");
  }
  if (!(ego_start.y >= 0.0 && ego_start.y <= road.width())) {
    throw ConfigError("ego_start: y must lie on the road");
  }
}

nlohmann::json to_json(const SimConfig & c)
{
  const auto & r = c.memory.retrieval;
  return {
    {"road", c.road},
    {"motion", c.motion},
    {"ego_start", c.ego_start},
    {"pedestrian", c.pedestrian},
    {"ttc_conflict_radius", c.ttc_conflict_radius},
    {"speed_limit", c.speed_limit},
    {"memory",
     {{"norm_scales", r.norm_scales},
      {"base_weights", r.base_weights},
      {"conflict_weights", r.conflict_weights},
      {"conflict_rule",
       {{"dy_threshold", r.conflict_rule.dy_threshold},
        {"ttc_threshold", r.conflict_rule.ttc_threshold}}},
      {"k", c.memory.k},
      {"ttc_cap", c.memory.ttc_cap},
      {"attention_radius", c.memory.attention_radius}}},
    {"rule",
     {{"ttc_brake", c.rule.ttc_brake},
      {"d_brake", c.rule.d_brake},
      {"cruise_speed", c.rule.cruise_speed},
      {"behind_margin", c.rule.behind_margin}}},
    {"llm",
     {{"endpoint_url", c.llm.endpoint_url},
      {"model_name", c.llm.model_name},
      {"temperature", c.llm.temperature},
      {"top_p", c.llm.top_p},
      {"max_tokens", c.llm.max_tokens},
      {"timeout_s", c.llm.timeout_s},
      {"retries", c.llm.retries},
      {"backoff_s", c.llm.backoff_s},
      {"max_in_flight", c.llm.max_in_flight}}},
    {"engine",
     {{"horizon_steps", c.engine.horizon_steps},
      {"max_steps", c.engine.max_steps},
      {"pipeline_depth", c.engine.pipeline_depth},
      {"goal_x", c.engine.goal_x},
      {"tick_wall_time", c.engine.tick_wall_time},
      {"decision_deadline", c.engine.decision_deadline}}},
  };
}

namespace
{

void check_known_keys(const nlohmann::json & patch, const nlohmann::json & schema, const std::string & prefix)
{
  if (!patch.is_object()) {
    throw ConfigError("config: expected an object at '" + (prefix.empty() ? "/" : prefix) + "'");
  }
  for (const auto & [key, value] : patch.items()) {
    const auto path = prefix + "/" + key;
    const auto it = schema.find(key);
    if (it == schema.end()) {
      throw ConfigError("config: unknown key '" + path + "'");
    }
    if (it->is_object()) {
      check_known_keys(value, *it, path);
    }
  }
}

SimConfig parse_complete(const nlohmann::json & j)
{
  SimConfig c;
  j.at("road").get_to(c.road);
  j.at("motion").get_to(c.motion);
  j.at("ego_start").get_to(c.ego_start);
  j.at("pedestrian").get_to(c.pedestrian);
  j.at("ttc_conflict_radius").get_to(c.ttc_conflict_radius);
  j.at("speed_limit").get_to(c.speed_limit);

  const auto & m = j.at("memory");
  m.at("norm_scales").get_to(c.memory.retrieval.norm_scales);
  m.at("base_weights").get_to(c.memory.retrieval.base_weights);
  m.at("conflict_weights").get_to(c.memory.retrieval.conflict_weights);
  m.at("conflict_rule").at("dy_threshold").get_to(c.memory.retrieval.conflict_rule.dy_threshold);
  m.at("conflict_rule").at("ttc_threshold").get_to(c.memory.retrieval.conflict_rule.ttc_threshold);
  m.at("k").get_to(c.memory.k);
  m.at("ttc_cap").get_to(c.memory.ttc_cap);
  m.at("attention_radius").get_to(c.memory.attention_radius);

  const auto & r = j.at("rule");
  r.at("ttc_brake").get_to(c.rule.ttc_brake);
  r.at("d_brake").get_to(c.rule.d_brake);
  r.at("cruise_speed").get_to(c.rule.cruise_speed);
  r.at("behind_margin").get_to(c.rule.behind_margin);

  const auto & l = j.at("llm");
  l.at("endpoint_url").get_to(c.llm.endpoint_url);
  l.at("model_name").get_to(c.llm.model_name);
  l.at("temperature").get_to(c.llm.temperature);
  l.at("top_p").get_to(c.llm.top_p);
  l.at("max_tokens").get_to(c.llm.max_tokens);
  l.at("timeout_s").get_to(c.llm.timeout_s);
  l.at("retries").get_to(c.llm.retries);
  l.at("backoff_s").get_to(c.llm.backoff_s);
  l.at("max_in_flight").get_to(c.llm.max_in_flight);

  const auto & e = j.at("engine");
  e.at("horizon_steps").get_to(c.engine.horizon_steps);
  e.at("max_steps").get_to(c.engine.max_steps);
  e.at("pipeline_depth").get_to(c.engine.pipeline_depth);
  e.at("goal_x").get_to(c.engine.goal_x);
  e.at("tick_wall_time").get_to(c.engine.tick_wall_time);
  e.at("decision_deadline").get_to(c.engine.decision_deadline);
  return c;
}

}  // namespace

SimConfig from_json(const nlohmann::json & doc)
{
  auto merged = to_json(SimConfig{});
  check_known_keys(doc, merged, "");
  merged.merge_patch(doc);
  try {
    auto c = parse_complete(merged);
    c.ego_start.lane = c.road.nearest_lane(c.ego_start.y);
    return c;
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const FormatError & e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string config_hash(const nlohmann::json & snapshot) { return sha256_hex(snapshot.dump()); }

std::map<std::string, std::string> read_environment()
{
  std::map<std::string, std::string> env;
  for (const char * name : {kEnvEndpoint, kEnvApiKey, kEnvModel, kEnvParallelism, kEnvDataDir}) {
    if (const char * value = std::getenv(name); value && *value) {
      env[name] = value;
    }
  }
  return env;
}

SimConfig resolve(const Layers & layers)
{
  auto doc = nlohmann::json::object();
  if (layers.file) {
    std::ifstream in(*layers.file, std::ios::binary);
    if (!in) {
      throw IoError("cannot read config file " + layers.file->string());
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception & e) {
      throw ConfigError("config file " + layers.file->string() + ": " + e.what());
    }
    check_known_keys(doc, to_json(SimConfig{}), "");
  }

  nlohmann::json env_patch = nlohmann::json::object();
  if (auto it = layers.environment.find(kEnvEndpoint); it != layers.environment.end()) {
    env_patch["llm"]["endpoint_url"] = it->second;
  }
  if (auto it = layers.environment.find(kEnvModel); it != layers.environment.end()) {
    env_patch["llm"]["model_name"] = it->second;
  }
  doc.merge_patch(env_patch);
  check_known_keys(layers.flag_patch, to_json(SimConfig{}), "");
  doc.merge_patch(layers.flag_patch);

  auto cfg = from_json(doc);
  if (auto it = layers.environment.find(kEnvApiKey); it != layers.environment.end()) {
    cfg.llm.api_key = it->second;
  }
  cfg.validate();
  return cfg;
}

std::filesystem::path data_dir()
{
  if (const char * dir = std::getenv(kEnvDataDir); dir && *dir) {
    return dir;
  }
  return PEDPLAN_DEFAULT_DATA_DIR;
}

}  // namespace pedplan::config
