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

#include "pedplan/analysis.hpp"

#include "pedplan/config.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace pedplan::analysis
{

EpisodeMetrics episode_metrics(const engine::EpisodeTrace & trace)
{
  if (trace.steps.empty()) {
    throw FormatError("episode_metrics: trace has no step records");
  }
  const auto cfg = config::from_json(trace.config);

  EpisodeMetrics m;
  m.seed = trace.seed;
  m.outcome = trace.outcome;
  m.success = trace.outcome == Outcome::Success;
  m.steps = static_cast<int>(trace.steps.size()) - 1;
  m.time_to_finish = m.steps * cfg.motion.dt;

  if (m.steps == 0) {
    m.avg_speed = trace.steps.front().ego.v;
  } else {
    double sum = 0.0;
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
      sum += trace.steps[i].ego.v;
    }
    m.avg_speed = sum / m.steps;
  }

  for (const auto & rec : trace.steps) {
    for (const auto & p : rec.pedestrians) {
      const double d = world::min_distance(rec.ego, p, cfg.motion);
      const double lat = world::min_lateral_distance(rec.ego, p, cfg.motion);
      m.min_ped_distance = m.min_ped_distance ? std::min(*m.min_ped_distance, d) : d;
      m.min_lateral_distance = m.min_lateral_distance ? std::min(*m.min_lateral_distance, lat) : lat;
      m.min_ttc = std::min(m.min_ttc, world::compute_ttc(rec.ego, p, cfg.ttc_conflict_radius));
    }
  }
  return m;
}

namespace
{

double z_for(double confidence)
{
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::domain_error("confidence must lie in (0, 1)");
  }
  boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + confidence / 2.0);
}

}  // namespace

std::pair<double, double> wilson_interval(int successes, int n, double confidence)
{
  if (n < 1) {
    throw std::domain_error("wilson_interval: n must be >= 1");
  }
  if (successes < 0 || successes > n) {
    throw std::domain_error("wilson_interval: successes must lie in [0, n]");
  }
  const double z = z_for(confidence);
  const double nn = n;
  const double p = successes / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

std::optional<MetricSummary> summarize(std::vector<double> values, double confidence)
{
  if (values.empty()) {
    return std::nullopt;
  }
  std::sort(values.begin(), values.end());
  MetricSummary s;
  s.count = values.size();
  const double n = static_cast<double>(s.count);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / (n - 1.0));
  }
  const double half = z_for(confidence) * s.std / std::sqrt(n);
  s.ci_lower = s.mean - half;
  s.ci_upper = s.mean + half;

  auto quantile = [&values](double q) {
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  return s;
}

bool AggregateReport::operator==(const AggregateReport & o) const
{
  const auto & a = latency;
  const auto & b = o.latency;
  const bool latency_equal = a.empty == b.empty && a.count == b.count && a.avg == b.avg &&
                             a.max == b.max && a.min == b.min && a.std == b.std;
  return label == o.label && preset == o.preset && policy == o.policy && n == o.n &&
         successes == o.successes && collisions == o.collisions && timeouts == o.timeouts &&
         success_rate == o.success_rate && success_ci_lower == o.success_ci_lower &&
         success_ci_upper == o.success_ci_upper && minima_population == o.minima_population &&
         metrics == o.metrics && latency_equal;
}

AggregateReport aggregate(const std::vector<engine::EpisodeTrace> & traces, std::string label)
{
  if (traces.empty()) {
    throw std::invalid_argument("aggregate: no traces");
  }
  AggregateReport r;
  r.label = std::move(label);
  r.preset = traces.front().preset;
  r.policy = traces.front().policy;
  r.n = static_cast<int>(traces.size());

  std::map<std::string, std::vector<double>> samples;
  for (const auto & t : traces) {
    const auto m = episode_metrics(t);
    switch (m.outcome) {
      case Outcome::Success:
        ++r.successes;
        samples["avg_speed"].push_back(m.avg_speed);
        samples["steps"].push_back(m.steps);
        samples["time_to_finish"].push_back(m.time_to_finish);
        break;
      case Outcome::Collision:
        ++r.collisions;
        break;
      case Outcome::Timeout:
        ++r.timeouts;
        break;
    }
    if (m.outcome != Outcome::Collision) {
      if (m.min_ped_distance) {
        samples["min_ped_distance"].push_back(*m.min_ped_distance);
      }
      if (m.min_lateral_distance) {
        samples["min_lateral_distance"].push_back(*m.min_lateral_distance);
      }
      if (std::isfinite(m.min_ttc)) {
        samples["min_ttc"].push_back(m.min_ttc);
      }
    }
  }
  r.success_rate = static_cast<double>(r.successes) / r.n;
  std::tie(r.success_ci_lower, r.success_ci_upper) = wilson_interval(r.successes, r.n);
  for (const char * name : kSuccessMetrics) {
    r.metrics[name] = summarize(samples[name]);
  }
  for (const char * name : kSafetyMetrics) {
    r.metrics[name] = summarize(samples[name]);
  }
  r.latency = engine::measure_latency(traces);
  return r;
}

namespace
{

nlohmann::json summary_to_json(const std::optional<MetricSummary> & s)
{
  if (!s) {
    return nullptr;
  }
  return {{"count", s->count}, {"mean", s->mean},     {"std", s->std},
          {"ci_lower", s->ci_lower}, {"ci_upper", s->ci_upper}, {"min", s->min},
          {"q1", s->q1},       {"median", s->median}, {"q3", s->q3},
          {"max", s->max}};
}

std::optional<MetricSummary> summary_from_json(const nlohmann::json & j)
{
  if (j.is_null()) {
    return std::nullopt;
  }
  MetricSummary s;
  j.at("count").get_to(s.count);
  j.at("mean").get_to(s.mean);
  j.at("std").get_to(s.std);
  j.at("ci_lower").get_to(s.ci_lower);
  j.at("ci_upper").get_to(s.ci_upper);
  j.at("min").get_to(s.min);
  j.at("q1").get_to(s.q1);
  j.at("median").get_to(s.median);
  j.at("q3").get_to(s.q3);
  j.at("max").get_to(s.max);
  return s;
}

std::string pct(double fraction) { return fmt::format("{:.1f}", 100.0 * fraction); }

}  // namespace

nlohmann::json report_to_json(const AggregateReport & r)
{
  auto metrics = nlohmann::json::object();
  for (const auto & [name, s] : r.metrics) {
    metrics[name] = summary_to_json(s);
  }
  return {
    {"label", r.label},
    {"preset", r.preset},
    {"policy", r.policy},
    {"n", r.n},
    {"successes", r.successes},
    {"collisions", r.collisions},
    {"timeouts", r.timeouts},
    {"success_rate", r.success_rate},
    {"success_ci", {r.success_ci_lower, r.success_ci_upper}},
    {"success_pct", pct(r.success_rate)},
    {"success_ci_pct", {pct(r.success_ci_lower), pct(r.success_ci_upper)}},
    {"minima_population", r.minima_population},
    {"metrics", metrics},
    {"latency", engine::to_json(r.latency)},
  };
}

AggregateReport report_from_json(const nlohmann::json & j)
{
  try {
    AggregateReport r;
    j.at("label").get_to(r.label);
    j.at("preset").get_to(r.preset);
    j.at("policy").get_to(r.policy);
    j.at("n").get_to(r.n);
    j.at("successes").get_to(r.successes);
    j.at("collisions").get_to(r.collisions);
    j.at("timeouts").get_to(r.timeouts);
    j.at("success_rate").get_to(r.success_rate);
    j.at("success_ci").at(0).get_to(r.success_ci_lower);
    j.at("success_ci").at(1).get_to(r.success_ci_upper);
    j.at("minima_population").get_to(r.minima_population);
    for (const auto & [name, s] : j.at("metrics").items()) {
      r.metrics[name] = summary_from_json(s);
    }
    const auto & lat = j.at("latency");
    r.latency.empty = lat.at("empty").get<bool>();
    r.latency.count = lat.at("count").get<std::size_t>();
    if (!r.latency.empty) {
      lat.at("avg").get_to(r.latency.avg);
      lat.at("max").get_to(r.latency.max);
      lat.at("min").get_to(r.latency.min);
      lat.at("std").get_to(r.latency.std);
    }
    return r;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

std::vector<std::string> csv_header()
{
  std::vector<std::string> h = {
    "label",          "preset",           "policy",           "n",
    "successes",      "collisions",       "timeouts",         "success_rate",
    "success_ci_lower", "success_ci_upper", "success_pct",    "success_ci_lower_pct",
    "success_ci_upper_pct", "minima_population"};
  auto add_metric = [&h](const char * name) {
    for (const char * field : {"count", "mean", "std", "ci_lower", "ci_upper"}) {
      h.push_back(fmt::format("{}_{}", name, field));
    }
  };
  for (const char * name : kSuccessMetrics) {
    add_metric(name);
  }
  for (const char * name : kSafetyMetrics) {
    add_metric(name);
  }
  for (const char * field : {"count", "avg", "std", "min", "max"}) {
    h.push_back(fmt::format("latency_{}", field));
  }
  return h;
}

namespace
{

std::string csv_field(const std::string & s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string> & cells)
{
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      line += ',';
    }
    line += cells[i];
  }
  return line + "\n";
}

}  // namespace

std::string to_csv(const std::vector<AggregateReport> & reports)
{
  std::string out = join(csv_header());
  for (const auto & r : reports) {
    std::vector<std::string> row = {
      csv_field(r.label),
      csv_field(r.preset),
      csv_field(r.policy),
      fmt::format("{}", r.n),
      fmt::format("{}", r.successes),
      fmt::format("{}", r.collisions),
      fmt::format("{}", r.timeouts),
      fmt::format("{}", r.success_rate),
      fmt::format("{}", r.success_ci_lower),
      fmt::format("{}", r.success_ci_upper),
      pct(r.success_rate),
      pct(r.success_ci_lower),
      pct(r.success_ci_upper),
      csv_field(r.minima_population)};
    auto add_metric = [&](const char * name) {
      const auto it = r.metrics.find(name);
      if (it == r.metrics.end() || !it->second) {
        row.insert(row.end(), 5, "");
        return;
      }
      const auto & s = *it->second;
      row.push_back(fmt::format("{}", s.count));
      row.push_back(fmt::format("{}", s.mean));
      row.push_back(fmt::format("{}", s.std));
      row.push_back(fmt::format("{}", s.ci_lower));
      row.push_back(fmt::format("{}", s.ci_upper));
    };
    for (const char * name : kSuccessMetrics) {
      add_metric(name);
    }
    for (const char * name : kSafetyMetrics) {
      add_metric(name);
    }
    row.push_back(fmt::format("{}", r.latency.count));
    if (r.latency.empty) {
      row.insert(row.end(), 4, "");
    } else {
      row.push_back(fmt::format("{}", r.latency.avg));
      row.push_back(fmt::format("{}", r.latency.std));
      row.push_back(fmt::format("{}", r.latency.min));
      row.push_back(fmt::format("{}", r.latency.max));
    }
    out += join(row);
  }
  return out;
}

std::string to_json_text(const std::vector<AggregateReport> & reports)
{
  auto arr = nlohmann::json::array();
  for (const auto & r : reports) {
    arr.push_back(report_to_json(r));
  }
  return nlohmann::json{{"reports", arr}}.dump(2) + "\n";
}

std::optional<ExportFormat> format_from_name(std::string_view name)
{
  if (name == "csv") {
    return ExportFormat::Csv;
  }
  if (name == "json") {
    return ExportFormat::Json;
  }
  return std::nullopt;
}

void export_reports(
  const std::vector<AggregateReport> & reports, ExportFormat format,
  const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << (format == ExportFormat::Csv ? to_csv(reports) : to_json_text(reports));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace pedplan::analysis
