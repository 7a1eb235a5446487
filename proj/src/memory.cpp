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

#include "pedplan/memory.hpp"

#include "pedplan/behaviors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pedplan::memory
{

void RetrievalConfig::validate() const
{
  for (double s : norm_scales) {
    if (!(s > 0.0)) {
      throw ConfigError("memory: norm_scales must all be > 0");
    }
  }
  for (const auto * weights : {&base_weights, &conflict_weights}) {
    bool any_positive = false;
    for (double w : *weights) {
      if (!(w >= 0.0)) {
        throw ConfigError("memory: weights must be >= 0");
      }
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
      throw ConfigError("memory: at least one weight must be > 0");
    }
  }
}

FeatureVector extract_features(
  const world::VehicleState & ego, const world::PedestrianState & ped, double ttc, double cap)
{
  return FeatureVector{{ped.x - ego.x, ped.y - ego.y, ego.v, ped.speed(), std::min(ttc, cap)}};
}

std::optional<std::size_t> select_query_pedestrian(
  const world::VehicleState & ego, std::span<const world::PedestrianState> peds,
  std::span<const double> ttcs)
{
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < peds.size(); ++i) {
    if (!best) {
      best = i;
      continue;
    }
    const double t = ttcs[i];
    const double bt = ttcs[*best];
    if (t < bt || (t == bt && std::abs(peds[i].x - ego.x) < std::abs(peds[*best].x - ego.x))) {
      best = i;
    }
  }
  return best;
}

std::optional<FeatureVector> query_features(
  const world::VehicleState & ego, std::span<const world::PedestrianState> peds,
  double conflict_radius, double ttc_cap, double attention_radius)
{
  const bool attended = std::any_of(peds.begin(), peds.end(), [&](const auto & p) {
    return std::hypot(p.x - ego.x, p.y - ego.y) <= attention_radius;
  });
  if (!attended) {
    return std::nullopt;
  }
  std::vector<double> ttcs;
  ttcs.reserve(peds.size());
  for (const auto & p : peds) {
    ttcs.push_back(world::compute_ttc(ego, p, conflict_radius));
  }
  const auto idx = select_query_pedestrian(ego, peds, ttcs);
  return extract_features(ego, peds[*idx], ttcs[*idx], ttc_cap);
}

bool is_near_conflict(const FeatureVector & query, const ConflictRule & rule)
{
  return std::abs(query.dy()) < rule.dy_threshold && query.ttc() < rule.ttc_threshold;
}

double weighted_distance(
  const FeatureVector & query, const FeatureVector & entry, const RetrievalConfig & cfg,
  const FeatureArray & weights)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double d = query.values[i] / cfg.norm_scales[i] - entry.values[i] / cfg.norm_scales[i];
    sum += weights[i] * d * d;
  }
  return std::sqrt(sum);
}

std::vector<Neighbor> retrieve(const MemoryBank & bank, const FeatureVector & query, std::size_t k)
{
  if (k < 1) {
    throw ConfigError("memory: k must be >= 1");
  }
  if (bank.empty()) {
    return {};
  }
  const auto & weights = is_near_conflict(query, bank.config.conflict_rule)
                           ? bank.config.conflict_weights
                           : bank.config.base_weights;

  std::vector<Neighbor> all(bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i) {
    all[i] = {i, weighted_distance(query, bank.entries[i].raw, bank.config, weights),
              &bank.entries[i]};
  }
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
    [](const Neighbor & a, const Neighbor & b) {
      return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
  all.resize(n);
  return all;
}

namespace
{

std::string single_line(std::string_view text)
{
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (char c : text) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) {
      out.push_back(' ');
      space = false;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_template(const MemoryEntry & entry)
{
  const auto & f = entry.raw;
  const char * along = f.dx() >= 0.0 ? "ahead" : "behind";
  const char * side = f.dy() >= 0.0 ? "to the left" : "to the right";
  return fmt::format(
    "Past situation: {}.\n"
    "The pedestrian was {:.2f} m {} and {:.2f} m {} of the vehicle; ego speed {:.2f} m/s, "
    "pedestrian speed {:.2f} m/s, time-to-collision {:.2f} s.\n"
    "Reasoning: {}\n"
    "Action: {}",
    single_line(entry.scenario_text), std::abs(f.dx()), along, std::abs(f.dy()), side, f.v_ego(),
    f.v_ped(), f.ttc(), single_line(entry.reasoning_text), action_name(entry.action));
}

namespace
{

nlohmann::json header_json(const RetrievalConfig & c)
{
  return {
    {"format_version", kBankFormatVersion},
    {"norm_scales", c.norm_scales},
    {"base_weights", c.base_weights},
    {"conflict_weights", c.conflict_weights},
    {"conflict_rule",
     {{"dy_threshold", c.conflict_rule.dy_threshold},
      {"ttc_threshold", c.conflict_rule.ttc_threshold}}},
  };
}

nlohmann::json entry_json(const MemoryEntry & e)
{
  return {
    {"raw", e.raw.values},
    {"scenario_text", e.scenario_text},
    {"reasoning_text", e.reasoning_text},
    {"action", to_index(e.action)},
    {"meta",
     {{"scenario", e.meta.scenario},
      {"seed", e.meta.seed},
      {"step", e.meta.step},
      {"outcome", e.meta.outcome}}},
  };
}

RetrievalConfig header_from_json(const nlohmann::json & j)
{
  if (!j.is_object() || !j.contains("format_version")) {
    throw FormatError("memory bank: line 1: missing header", 1);
  }
  const auto & version = j.at("format_version");
  if (!version.is_number_integer() || version.get<int>() != kBankFormatVersion) {
    throw IncompatibleFormatError(
      "memory bank: incompatible format_version " + version.dump() + " (this build reads " +
        std::to_string(kBankFormatVersion) + ")",
      1);
  }
  RetrievalConfig c;
  j.at("norm_scales").get_to(c.norm_scales);
  j.at("base_weights").get_to(c.base_weights);
  j.at("conflict_weights").get_to(c.conflict_weights);
  j.at("conflict_rule").at("dy_threshold").get_to(c.conflict_rule.dy_threshold);
  j.at("conflict_rule").at("ttc_threshold").get_to(c.conflict_rule.ttc_threshold);
  c.validate();
  return c;
}

MemoryEntry entry_from_json(const nlohmann::json & j)
{
  MemoryEntry e;
  j.at("raw").get_to(e.raw.values);
  for (double v : e.raw.values) {
    if (!std::isfinite(v)) {
      throw FormatError("non-finite feature value");
    }
  }
  j.at("scenario_text").get_to(e.scenario_text);
  j.at("reasoning_text").get_to(e.reasoning_text);
  const auto action = action_from_index(j.at("action").get<int>());
  if (!action) {
    throw FormatError("action index out of range");
  }
  e.action = *action;
  const auto & meta = j.at("meta");
  meta.at("scenario").get_to(e.meta.scenario);
  meta.at("seed").get_to(e.meta.seed);
  meta.at("step").get_to(e.meta.step);
  meta.at("outcome").get_to(e.meta.outcome);
  if (e.meta.outcome != "success") {
    throw FormatError("stored entries must come from successful episodes");
  }
  return e;
}

}  // namespace

std::string to_jsonl(const MemoryBank & bank)
{
  std::string out = header_json(bank.config).dump();
  out.push_back('\n');
  for (const auto & e : bank.entries) {
    out += entry_json(e).dump();
    out.push_back('\n');
  }
  return out;
}

MemoryBank from_jsonl(std::string_view text)
{
  MemoryBank bank;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      if (!have_header) {
        bank.config = header_from_json(j);
        have_header = true;
      } else {
        bank.entries.push_back(entry_from_json(j));
      }
    } catch (const IncompatibleFormatError &) {
      throw;
    } catch (const std::exception & e) {
      throw FormatError(
        "memory bank: line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  if (!have_header) {
    throw FormatError("memory bank: line 1: missing header", 1);
  }
  return bank;
}

void save(const MemoryBank & bank, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write memory bank " + path.string());
  }
  out << to_jsonl(bank);
  if (!out) {
    throw IoError("failed writing memory bank " + path.string());
  }
}

MemoryBank load(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read memory bank " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

MemoryBank build_bank(std::span<const engine::EpisodeTrace> traces, const BankBuildConfig & cfg)
{
  cfg.retrieval.validate();
  MemoryBank bank;
  bank.config = cfg.retrieval;

  for (const auto & trace : traces) {
    if (trace.outcome != Outcome::Success) {
      continue;
    }
    for (const auto & d : trace.decisions) {
      if (d.obs_step < 0 || static_cast<std::size_t>(d.obs_step) >= trace.steps.size()) {
        continue;
      }
      const auto & rec = trace.steps[static_cast<std::size_t>(d.obs_step)];
      const auto features = query_features(
        rec.ego, rec.pedestrians, cfg.conflict_radius, cfg.ttc_cap, cfg.attention_radius);
      if (!features) {
        continue;
      }
      MemoryEntry e;
      e.raw = *features;
      e.scenario_text = behaviors::preset_description(trace.preset);
      e.reasoning_text = d.raw_text;
      e.action = d.action;
      e.meta = {trace.preset, trace.seed, d.obs_step, "success"};
      bank.entries.push_back(std::move(e));
    }
  }
  return bank;
}

}  // namespace pedplan::memory
