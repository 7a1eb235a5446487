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

#include "pedplan/trace.hpp"

#include "pedplan/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pedplan::engine
{

namespace
{

nlohmann::json step_to_json(const StepRecord & r)
{
  nlohmann::json peds = nlohmann::json::array();
  for (const auto & p : r.pedestrians) {
    peds.push_back(p);
  }
  return {
    {"step", r.step},
    {"cycle", r.cycle},
    {"ego", r.ego},
    {"pedestrians", std::move(peds)},
    {"command", r.command},
    {"min_distance", r.min_distance ? nlohmann::json(*r.min_distance) : nlohmann::json(nullptr)},
    {"min_ttc", number_or_inf(r.min_ttc)},
  };
}

StepRecord step_from_json(const nlohmann::json & j)
{
  StepRecord r;
  j.at("step").get_to(r.step);
  j.at("cycle").get_to(r.cycle);
  j.at("ego").get_to(r.ego);
  j.at("pedestrians").get_to(r.pedestrians);
  j.at("command").get_to(r.command);
  if (!j.at("min_distance").is_null()) {
    r.min_distance = j.at("min_distance").get<double>();
  }
  r.min_ttc = number_or_inf_from(j.at("min_ttc"));
  return r;
}

nlohmann::json decision_to_json(const DecisionRecord & d, bool include_timing)
{
  nlohmann::json j = {
    {"index", d.index},
    {"request_id", d.request_id},
    {"obs_step", d.obs_step},
    {"apply_step", d.apply_step},
    {"staleness", d.staleness},
    {"prompt_hash", d.prompt_hash},
    {"raw_text", d.raw_text},
    {"action", to_index(d.action)},
    {"parse_ok", d.parse_ok},
    {"source", source_name(d.source)},
    {"retrieved", d.retrieved},
  };
  if (include_timing) {
    j["latency_s"] = d.latency_s;
  }
  return j;
}

DecisionRecord decision_from_json(const nlohmann::json & j)
{
  DecisionRecord d;
  j.at("index").get_to(d.index);
  j.at("request_id").get_to(d.request_id);
  j.at("obs_step").get_to(d.obs_step);
  j.at("apply_step").get_to(d.apply_step);
  j.at("staleness").get_to(d.staleness);
  j.at("prompt_hash").get_to(d.prompt_hash);
  j.at("raw_text").get_to(d.raw_text);
  const auto action = action_from_index(j.at("action").get<int>());
  if (!action) {
    throw FormatError("trace: invalid action index in decision " + std::to_string(d.index));
  }
  d.action = *action;
  j.at("parse_ok").get_to(d.parse_ok);
  const auto source = source_from_name(j.at("source").get<std::string>());
  if (!source) {
    throw FormatError("trace: invalid decision source");
  }
  d.source = *source;
  j.at("retrieved").get_to(d.retrieved);
  d.latency_s = j.value("latency_s", 0.0);
  return d;
}

}  // namespace

nlohmann::json trace_to_json(const EpisodeTrace & trace, bool include_timing)
{
  nlohmann::json steps = nlohmann::json::array();
  for (const auto & s : trace.steps) {
    steps.push_back(step_to_json(s));
  }
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto & d : trace.decisions) {
    decisions.push_back(decision_to_json(d, include_timing));
  }
  return {
    {"schema_version", trace.schema_version},
    {"seed", trace.seed},
    {"preset", trace.preset},
    {"policy", trace.policy},
    {"template_version", trace.template_version},
    {"config_hash", trace.config_hash},
    {"config", trace.config},
    {"scenario", trace.scenario},
    {"outcome", outcome_name(trace.outcome)},
    {"steps", std::move(steps)},
    {"decisions", std::move(decisions)},
  };
}

EpisodeTrace trace_from_json(const nlohmann::json & doc)
{
  try {
    EpisodeTrace t;
    doc.at("schema_version").get_to(t.schema_version);
    if (t.schema_version != kTraceSchemaVersion) {
      throw FormatError(
        "trace: unsupported schema_version " + std::to_string(t.schema_version) + " (expected " +
        std::to_string(kTraceSchemaVersion) + ")");
    }
    doc.at("seed").get_to(t.seed);
    doc.at("preset").get_to(t.preset);
    doc.at("policy").get_to(t.policy);
    doc.at("template_version").get_to(t.template_version);
    doc.at("config_hash").get_to(t.config_hash);
    t.config = doc.at("config");
    doc.at("scenario").get_to(t.scenario);
    const auto outcome = outcome_from_name(doc.at("outcome").get<std::string>());
    if (!outcome) {
      throw FormatError("trace: invalid outcome");
    }
    t.outcome = *outcome;
    for (const auto & s : doc.at("steps")) {
      t.steps.push_back(step_from_json(s));
    }
    for (const auto & d : doc.at("decisions")) {
      t.decisions.push_back(decision_from_json(d));
    }
    return t;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("trace: ") + e.what());
  }
}

std::string canonical_trace_text(const EpisodeTrace & trace)
{
  return trace_to_json(trace, false).dump();
}

void write_trace(const EpisodeTrace & trace, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write trace " + path.string());
  }
  out << trace_to_json(trace).dump() << '\n';
  if (!out) {
    throw IoError("failed writing trace " + path.string());
  }
}

EpisodeTrace read_trace(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read trace " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return trace_from_json(doc);
}

std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path & dir)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") {
      continue;
    }
    const auto stem = entry.path().stem().string();
    if (stem == "manifest" || stem == "report") {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace pedplan::engine
