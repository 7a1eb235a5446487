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

#ifndef PEDPLAN__ANALYSIS_HPP_
#define PEDPLAN__ANALYSIS_HPP_

#include "pedplan/engine.hpp"
#include "pedplan/trace.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pedplan::analysis
{

struct EpisodeMetrics
{
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Timeout;
  bool success = false;
  double avg_speed = 0.0;       // over completed steps 1..N
  int steps = 0;
  std::optional<double> min_ped_distance;      // nullopt without pedestrians
  std::optional<double> min_lateral_distance;  // nullopt without pedestrians
  double min_ttc = world::kNoConflict;
  double time_to_finish = 0.0;  // steps * dt [s]
};

/// Minima are recomputed from the logged states with the trace's own motion config.
EpisodeMetrics episode_metrics(const engine::EpisodeTrace & trace);

/// Wilson score interval. `confidence` is two-sided (0.95 -> z = 1.96).
std::pair<double, double> wilson_interval(int successes, int n, double confidence = 0.95);

struct MetricSummary
{
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;       // sample standard deviation; 0 for a single value
  double ci_lower = 0.0;  // mean +- z * std / sqrt(count)
  double ci_upper = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  bool operator==(const MetricSummary &) const = default;
};

/// Summary of `values`, or nullopt when empty. Quartiles use linear interpolation.
std::optional<MetricSummary> summarize(std::vector<double> values, double confidence = 0.95);

inline constexpr const char * kSuccessMetrics[] = {"avg_speed", "steps", "time_to_finish"};
inline constexpr const char * kSafetyMetrics[] = {
  "min_ped_distance", "min_lateral_distance", "min_ttc"};

struct AggregateReport
{
  std::string label;
  std::string preset;
  std::string policy;
  int n = 0;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
  double success_rate = 0.0;
  double success_ci_lower = 0.0;
  double success_ci_upper = 0.0;
  /// Population of the safety minima. Speed and timing metrics use successful episodes.
  std::string minima_population = "non_collided";
  std::map<std::string, std::optional<MetricSummary>> metrics;
  engine::LatencySummary latency;

  bool operator==(const AggregateReport & o) const;
};

AggregateReport aggregate(const std::vector<engine::EpisodeTrace> & traces, std::string label = {});

nlohmann::json report_to_json(const AggregateReport & report);
AggregateReport report_from_json(const nlohmann::json & doc);

/// Fixed column order; see docs/report_schema.md.
std::vector<std::string> csv_header();
std::string to_csv(const std::vector<AggregateReport> & reports);
std::string to_json_text(const std::vector<AggregateReport> & reports);

enum class ExportFormat { Csv, Json };
std::optional<ExportFormat> format_from_name(std::string_view name);
void export_reports(
  const std::vector<AggregateReport> & reports, ExportFormat format,
  const std::filesystem::path & path);

}  // namespace pedplan::analysis

#endif  // PEDPLAN__ANALYSIS_HPP_
