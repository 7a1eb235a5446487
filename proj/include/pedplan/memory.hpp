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

#ifndef PEDPLAN__MEMORY_HPP_
#define PEDPLAN__MEMORY_HPP_

#include "pedplan/trace.hpp"
#include "pedplan/world.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Episodic memory: pairwise ego-pedestrian interaction states from successful episodes,
// retrieved by weighted kNN and turned into few-shot demonstrations.
namespace pedplan::memory
{

inline constexpr int kBankFormatVersion = 1;
inline constexpr std::size_t kFeatureCount = 5;

using FeatureArray = std::array<double, kFeatureCount>;

/// [dx, dy, v_ego, v_ped, ttc] in that order. ttc is always the capped, finite value.
struct FeatureVector
{
  FeatureArray values{};

  double dx() const { return values[0]; }
  double dy() const { return values[1]; }
  double v_ego() const { return values[2]; }
  double v_ped() const { return values[3]; }
  double ttc() const { return values[4]; }

  bool operator==(const FeatureVector &) const = default;
};

struct EntryMeta
{
  std::string scenario;
  std::uint64_t seed = 0;
  int step = 0;
  std::string outcome = "success";

  bool operator==(const EntryMeta &) const = default;
};

struct MemoryEntry
{
  FeatureVector raw;
  std::string scenario_text;
  std::string reasoning_text;
  Action action = Action::StayIdle;
  EntryMeta meta;

  bool operator==(const MemoryEntry &) const = default;
};

struct ConflictRule
{
  double dy_threshold = 2.0;   // [m]
  double ttc_threshold = 3.0;  // [s]

  bool operator==(const ConflictRule &) const = default;
};

struct RetrievalConfig
{
  FeatureArray norm_scales{50.0, 10.0, 15.0, 3.0, 10.0};
  FeatureArray base_weights{1.0, 1.0, 0.5, 0.5, 1.5};
  FeatureArray conflict_weights{1.0, 2.0, 0.5, 0.5, 1.5};
  ConflictRule conflict_rule;

  void validate() const;
  bool operator==(const RetrievalConfig &) const = default;
};

struct MemoryBank
{
  RetrievalConfig config;
  std::vector<MemoryEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  bool operator==(const MemoryBank &) const = default;
};

struct Neighbor
{
  std::size_t index = 0;
  double distance = 0.0;
  const MemoryEntry * entry = nullptr;
};

FeatureVector extract_features(
  const world::VehicleState & ego, const world::PedestrianState & ped, double ttc, double cap);

/// Index of the pedestrian a query should describe: minimal ttc, then minimal |dx|, then lowest
/// index. nullopt for an empty scene.
std::optional<std::size_t> select_query_pedestrian(
  const world::VehicleState & ego, std::span<const world::PedestrianState> peds,
  std::span<const double> ttcs);

/// Features of the scene's most critical pedestrian, or nullopt when no pedestrian lies within
/// `attention_radius` of the ego center.
std::optional<FeatureVector> query_features(
  const world::VehicleState & ego, std::span<const world::PedestrianState> peds,
  double conflict_radius, double ttc_cap, double attention_radius);

/// Near-conflict test selecting the conflict weights. Both comparisons are strict.
bool is_near_conflict(const FeatureVector & query, const ConflictRule & rule);

double weighted_distance(
  const FeatureVector & query, const FeatureVector & entry, const RetrievalConfig & cfg,
  const FeatureArray & weights);

/// k nearest entries, ascending by distance, ties by insertion order. Empty bank -> empty result.
std::vector<Neighbor> retrieve(const MemoryBank & bank, const FeatureVector & query, std::size_t k);

/// Few-shot demonstration block. Ends with the action name, no trailing newline.
std::string to_template(const MemoryEntry & entry);

class IncompatibleFormatError : public FormatError
{
public:
  using FormatError::FormatError;
};

/// JSON Lines: a header object followed by one entry per line.
void save(const MemoryBank & bank, const std::filesystem::path & path);
MemoryBank load(const std::filesystem::path & path);

std::string to_jsonl(const MemoryBank & bank);
MemoryBank from_jsonl(std::string_view text);

struct BankBuildConfig
{
  RetrievalConfig retrieval;
  double attention_radius = 40.0;
  double ttc_cap = 10.0;
  double conflict_radius = 2.8;
};

/// One entry per decision of each successful trace whose observed scene had a pedestrian within
/// the attention radius. Collided and timed-out episodes contribute nothing.
MemoryBank build_bank(std::span<const engine::EpisodeTrace> traces, const BankBuildConfig & cfg);

}  // namespace pedplan::memory

#endif  // PEDPLAN__MEMORY_HPP_
