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

#include "pedplan/cli.hpp"

#include "pedplan/analysis.hpp"
#include "pedplan/config.hpp"
#include "pedplan/engine.hpp"
#include "pedplan/llm_client.hpp"
#include "pedplan/memory.hpp"
#include "pedplan/policy.hpp"

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

namespace pedplan::cli
{

namespace fs = std::filesystem;

class VerificationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint64_t> parse_seeds(const std::vector<std::string> & specs)
{
  auto parse_u64 = [](const std::string & s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      if (s.empty() || s.front() == '-') {
        throw std::invalid_argument(s);
      }
      v = std::stoull(s, &pos);
    } catch (const std::exception &) {
      throw ConfigError(fmt::format("invalid seed '{}'", s));
    }
    if (pos != s.size()) {
      throw ConfigError(fmt::format("invalid seed '{}'", s));
    }
    return static_cast<std::uint64_t>(v);
  };

  std::vector<std::uint64_t> seeds;
  for (const auto & spec : specs) {
    std::size_t start = 0;
    while (start <= spec.size()) {
      auto end = spec.find(',', start);
      if (end == std::string::npos) {
        end = spec.size();
      }
      const auto item = spec.substr(start, end - start);
      if (const auto dots = item.find(".."); dots != std::string::npos) {
        const auto lo = parse_u64(item.substr(0, dots));
        const auto hi = parse_u64(item.substr(dots + 2));
        if (hi < lo) {
          throw ConfigError(fmt::format("empty seed range '{}'", item));
        }
        for (auto s = lo; s <= hi; ++s) {
          seeds.push_back(s);
        }
      } else {
        seeds.push_back(parse_u64(item));
      }
      start = end + 1;
    }
  }
  return seeds;
}

std::vector<std::string> recipe_names() { return {"exp1", "exp2", "exp3", "exp4"}; }

std::vector<Condition> recipe(std::string_view name)
{
  if (name == "exp1") {
    return {{"exp1_jaywalk_zero", "jaywalk", std::nullopt}};
  }
  if (name == "exp2") {
    return {
      {"exp2_zero", "single_cross", std::nullopt},
      {"exp2_memory", "single_cross", std::string("single_cross")}};
  }
  if (name == "exp3") {
    return {{"exp3_memory", "three_peds", std::string("single_cross")}};
  }
  if (name == "exp4") {
    return {
      {"exp4_turn_back", "turn_back", std::string("turn_back")},
      {"exp4_hesitation", "hesitation", std::string("turn_back")},
      {"exp4_bidirectional", "bidirectional", std::string("turn_back")}};
  }
  throw ConfigError(fmt::format("unknown recipe '{}' (expected exp1..exp4)", name));
}

namespace
{

struct ConfigOptions
{
  std::string config_file;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App * cmd, ConfigOptions & opts)
{
  cmd->add_option("--config", opts.config_file, "JSON config file");
  cmd->add_option("--set", opts.sets, "Override a config value, e.g. engine.horizon_steps=5");
}

nlohmann::json patch_from_sets(const std::vector<std::string> & sets)
{
  auto patch = nlohmann::json::object();
  for (const auto & s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(fmt::format("--set expects key.path=value, got '{}'", s));
    }
    const auto path = s.substr(0, eq);
    const auto text = s.substr(eq + 1);
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &) {
      value = text;
    }
    nlohmann::json * node = &patch;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (key.empty()) {
        throw ConfigError(fmt::format("--set: malformed key '{}'", path));
      }
      if (dot == std::string::npos) {
        (*node)[key] = value;
        break;
      }
      node = &(*node)[key];
      start = dot + 1;
    }
  }
  return patch;
}

config::SimConfig resolve_config(const ConfigOptions & opts, const nlohmann::json & extra = {})
{
  config::Layers layers;
  if (!opts.config_file.empty()) {
    layers.file = opts.config_file;
  }
  layers.environment = config::read_environment();
  layers.flag_patch = patch_from_sets(opts.sets);
  if (extra.is_object()) {
    layers.flag_patch.merge_patch(extra);
  }
  return config::resolve(layers);
}

std::string utc_now()
{
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
}

std::vector<engine::EpisodeTrace> read_traces(const fs::path & dir)
{
  std::vector<engine::EpisodeTrace> traces;
  for (const auto & file : engine::list_trace_files(dir)) {
    try {
      traces.push_back(engine::read_trace(file));
    } catch (const FormatError & e) {
      throw FormatError(fmt::format("{}: {}", file.string(), e.what()));
    }
  }
  return traces;
}

void write_text(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    throw IoError("cannot write " + path.string());
  }
}

// --- run --------------------------------------------------------------------------------------

struct RunOptions
{
  std::string preset;
  std::string recipe;
  std::string policy = "rule";
  std::vector<std::string> seeds{"0..49"};
  std::string memory;
  int pipeline = -1;
  std::string out_dir = "runs";
  std::string run_id;
  std::string template_file;
  int parallelism = 0;
  std::string fixtures;
  std::string record_dir;
  std::string mock_action = "Stay Idle";
  double mock_delay = 0.0;
  ConfigOptions cfg;
};

struct PolicyHolder
{
  std::unique_ptr<policy::DecisionPolicy> inner;
  std::unique_ptr<policy::RecordingPolicy> recorder;
  policy::DecisionPolicy & get() { return recorder ? *recorder : *inner; }
};

PolicyHolder make_policy(
  const RunOptions & o, const config::SimConfig & sim, const fs::path & fixtures)
{
  PolicyHolder h;
  if (o.policy == "rule") {
    h.inner = std::make_unique<policy::RulePolicy>(sim.rule);
  } else if (o.policy == "mock") {
    const auto action = action_from_name(o.mock_action);
    if (!action) {
      throw ConfigError(fmt::format("unknown --mock-action '{}'", o.mock_action));
    }
    auto mock = policy::MockPolicy::constant(*action);
    mock->set_delay(o.mock_delay);
    h.inner = std::move(mock);
  } else if (o.policy == "recorded") {
    if (fixtures.empty()) {
      throw ConfigError("--policy recorded requires --fixtures <dir>");
    }
    h.inner = std::make_unique<policy::RecordedPolicy>(fixtures);
  } else if (o.policy == "llm") {
    auto llm = std::make_unique<policy::LlmPolicy>(sim.llm);
    if (!llm->probe()) {
      throw ConfigError(fmt::format("LLM endpoint unreachable: {}", sim.llm.endpoint_url));
    }
    h.inner = std::move(llm);
  } else {
    throw ConfigError(
      fmt::format("unknown policy '{}' (expected llm, rule, mock or recorded)", o.policy));
  }
  if (!o.record_dir.empty()) {
    fs::create_directories(o.record_dir);
    h.recorder = std::make_unique<policy::RecordingPolicy>(
      *h.inner, o.record_dir, o.policy == "llm" ? sim.llm.model_name : o.policy);
  }
  return h;
}

int default_parallelism()
{
  const auto env = config::read_environment();
  if (auto it = env.find(config::kEnvParallelism); it != env.end()) {
    try {
      const int p = std::stoi(it->second);
      if (p >= 1) {
        return p;
      }
    } catch (const std::exception &) {
    }
    throw ConfigError(fmt::format("{} must be a positive integer", config::kEnvParallelism));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct ConditionOutcome
{
  bool all_executed = true;
  std::optional<analysis::AggregateReport> report;
};

ConditionOutcome run_condition(
  const Condition & cond, const RunOptions & o, const engine::RunSetup & setup,
  const std::vector<std::uint64_t> & seeds, const fs::path & dir, const std::string & run_id,
  const std::string & bank_path, const fs::path & fixtures, int parallelism, std::ostream & out,
  std::ostream & err)
{
  fs::create_directories(dir);
  auto holder = make_policy(o, setup.sim, fixtures);
  const auto snapshot = config::to_json(setup.sim);
  const auto started = utc_now();

  std::size_t finished = 0;
  const auto results = engine::run_batch(
    cond.preset, seeds, holder.get(), setup, parallelism, [&](const engine::EpisodeResult & r) {
      ++finished;
      if (r.trace) {
        out << fmt::format(
                 "[{}/{}] {} seed {}: {} ({} steps)\n", finished, seeds.size(), cond.name, r.seed,
                 outcome_name(r.trace->outcome), r.trace->steps.size() - 1)
            << std::flush;
      } else {
        err << fmt::format(
                 "[{}/{}] {} seed {}: aborted: {}\n", finished, seeds.size(), cond.name, r.seed,
                 r.error)
            << std::flush;
      }
    });

  ConditionOutcome outcome;
  std::map<std::uint64_t, int> used;
  auto episodes = nlohmann::json::array();
  std::vector<engine::EpisodeTrace> traces;
  for (const auto & r : results) {
    const int dup = used[r.seed]++;
    if (!r.trace) {
      outcome.all_executed = false;
      episodes.push_back({{"seed", r.seed}, {"error", r.error}});
      continue;
    }
    const auto name =
      dup == 0 ? fmt::format("{}.json", r.seed) : fmt::format("{}_{}.json", r.seed, dup);
    engine::write_trace(*r.trace, dir / name);
    episodes.push_back(
      {{"seed", r.seed}, {"file", name}, {"outcome", outcome_name(r.trace->outcome)}});
    traces.push_back(*r.trace);
  }

  nlohmann::json manifest = {
    {"run_id", run_id},
    {"condition", cond.name},
    {"preset", cond.preset},
    {"policy", o.policy},
    {"model_name", o.policy == "llm" ? nlohmann::json(setup.sim.llm.model_name) : nlohmann::json()},
    {"memory_bank", bank_path.empty() ? nlohmann::json() : nlohmann::json(bank_path)},
    {"template_version", setup.prompt_template.version()},
    {"seeds", seeds},
    {"config_hash", config::config_hash(snapshot)},
    {"config", snapshot},
    {"parallelism", parallelism},
    {"started_at", started},
    {"finished_at", utc_now()},
    {"episodes", episodes},
  };
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  if (!traces.empty()) {
    outcome.report = analysis::aggregate(traces, cond.name);
    analysis::export_reports({*outcome.report}, analysis::ExportFormat::Json, dir / "report.json");
    analysis::export_reports({*outcome.report}, analysis::ExportFormat::Csv, dir / "report.csv");
    const auto & rep = *outcome.report;
    out << fmt::format(
      "{}: success {}/{} = {:.1f}% (95% CI {:.1f}%-{:.1f}%), collisions {}, timeouts {}\n",
      cond.name, rep.successes, rep.n, 100.0 * rep.success_rate, 100.0 * rep.success_ci_lower,
      100.0 * rep.success_ci_upper, rep.collisions, rep.timeouts);
  }
  return outcome;
}

int cmd_run(const RunOptions & o, std::ostream & out, std::ostream & err)
{
  if (o.preset.empty() == o.recipe.empty()) {
    throw CLI::ValidationError("run", "give exactly one of <preset> or --recipe");
  }
  std::vector<Condition> conditions;
  if (!o.recipe.empty()) {
    if (!o.memory.empty()) {
      throw ConfigError("--memory cannot be combined with --recipe; recipes name their banks");
    }
    conditions = recipe(o.recipe);
  } else {
    if (!behaviors::is_preset(o.preset)) {
      throw ConfigError(fmt::format(
        "unknown preset '{}' (available: {})", o.preset,
        fmt::join(behaviors::preset_names(), ", ")));
    }
    conditions.push_back({o.preset, o.preset, std::nullopt});
  }

  nlohmann::json extra = nlohmann::json::object();
  if (o.pipeline >= 0) {
    extra["engine"]["pipeline_depth"] = o.pipeline;
  }
  const auto sim = resolve_config(o.cfg, extra);
  const auto seeds = parse_seeds(o.seeds);
  if (seeds.empty()) {
    throw ConfigError("no seeds given");
  }
  const int parallelism = o.parallelism > 0 ? o.parallelism : default_parallelism();
  const auto tmpl = o.template_file.empty() ? prompting::PromptTemplate::builtin()
                                             : prompting::PromptTemplate::load(o.template_file);
  const auto run_id = o.run_id.empty()
                        ? fmt::format("run-{:%Y%m%d-%H%M%S}", fmt::gmtime(std::time(nullptr)))
                        : o.run_id;
  const fs::path root = fs::path(o.out_dir) / run_id;

  bool all_executed = true;
  std::vector<analysis::AggregateReport> reports;
  for (const auto & cond : conditions) {
    engine::RunSetup setup;
    setup.sim = sim;
    setup.prompt_template = tmpl;
    std::string bank_path;
    if (!o.memory.empty()) {
      bank_path = o.memory;
    } else if (cond.bank) {
      bank_path = (config::data_dir() / "banks" / (*cond.bank + ".jsonl")).string();
    }
    if (!bank_path.empty()) {
      setup.memory = std::make_shared<memory::MemoryBank>(memory::load(bank_path));
    }
    fs::path fixtures = o.fixtures;
    if (!o.recipe.empty() && !fixtures.empty()) {
      fixtures /= cond.name;
    }
    const auto dir = o.recipe.empty() ? root : root / cond.name;
    auto result = run_condition(
      cond, o, setup, seeds, dir, run_id, bank_path, fixtures, parallelism, out, err);
    all_executed = all_executed && result.all_executed;
    if (result.report) {
      reports.push_back(*result.report);
    }
  }
  if (!o.recipe.empty() && !reports.empty()) {
    analysis::export_reports(reports, analysis::ExportFormat::Csv, root / "report.csv");
    analysis::export_reports(reports, analysis::ExportFormat::Json, root / "report.json");
  }
  out << fmt::format("run directory: {}\n", root.string());
  if (!all_executed) {
    err << "some episodes aborted; see the manifest for per-seed errors\n";
    return kExitVerification;
  }
  return kExitOk;
}

// --- build-memory ------------------------------------------------------------------------------

int cmd_build_memory(
  const std::string & trace_dir, const std::string & out_path, const ConfigOptions & cfg_opts,
  std::ostream & out, std::ostream & err)
{
  if (!fs::is_directory(trace_dir)) {
    throw IoError("not a directory: " + trace_dir);
  }
  const auto sim = resolve_config(cfg_opts);
  const auto traces = read_traces(trace_dir);
  const auto bank = memory::build_bank(traces, sim.memory.build_config(sim.ttc_conflict_radius));
  const auto successes = std::count_if(traces.begin(), traces.end(), [](const auto & t) {
    return t.outcome == Outcome::Success;
  });
  if (successes == 0) {
    err << fmt::format("warning: no successful traces in {}; writing an empty bank\n", trace_dir);
  }
  memory::save(bank, out_path);
  out << fmt::format(
    "entries: {} (from {} successful of {} traces) -> {}\n", bank.size(), successes,
    traces.size(), out_path);
  return kExitOk;
}

// --- replay ------------------------------------------------------------------------------------

int cmd_replay(
  const std::vector<std::string> & paths, std::optional<double> dt, double tolerance,
  std::ostream & out, std::ostream & err)
{
  std::vector<fs::path> files;
  for (const auto & p : paths) {
    if (fs::is_directory(p)) {
      const auto listed = engine::list_trace_files(p);
      files.insert(files.end(), listed.begin(), listed.end());
    } else if (fs::is_regular_file(p)) {
      files.emplace_back(p);
    } else {
      throw IoError("no such trace file or directory: " + p);
    }
  }
  if (files.empty()) {
    throw IoError("no traces to replay");
  }
  engine::ReplayOptions options;
  options.dt_override = dt;
  options.tolerance = tolerance;
  int failures = 0;
  for (const auto & file : files) {
    const auto trace = engine::read_trace(file);
    const auto report = engine::replay(trace, options);
    if (report.verified) {
      out << fmt::format("verified {}: {}\n", file.string(), report.detail);
    } else {
      ++failures;
      err << fmt::format(
        "MISMATCH {}: first divergent step {}: {}\n", file.string(),
        report.divergent_step.value_or(-1), report.detail);
    }
  }
  return failures == 0 ? kExitOk : kExitVerification;
}

// --- report ------------------------------------------------------------------------------------

std::vector<analysis::AggregateReport> reports_for(const fs::path & dir)
{
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<analysis::AggregateReport> reports;
  auto traces = read_traces(dir);
  if (!traces.empty()) {
    std::set<std::string> presets;
    for (const auto & t : traces) {
      presets.insert(t.preset);
    }
    if (presets.size() > 1) {
      throw ConfigError(fmt::format(
        "{} mixes presets ({}); a report needs a homogeneous run directory", dir.string(),
        fmt::join(presets, ", ")));
    }
    reports.push_back(analysis::aggregate(traces, dir.filename().string()));
    return reports;
  }
  std::vector<fs::path> subdirs;
  for (const auto & e : fs::directory_iterator(dir)) {
    if (e.is_directory()) {
      subdirs.push_back(e.path());
    }
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto & sub : subdirs) {
    if (!engine::list_trace_files(sub).empty()) {
      auto nested = reports_for(sub);
      reports.insert(reports.end(), nested.begin(), nested.end());
    }
  }
  return reports;
}

int cmd_report(
  const std::vector<std::string> & dirs, const std::string & format_name,
  const std::string & out_path, std::ostream & out)
{
  const auto format = analysis::format_from_name(format_name);
  if (!format) {
    throw CLI::ValidationError("--format", "expected csv or json");
  }
  std::vector<analysis::AggregateReport> reports;
  for (const auto & d : dirs) {
    auto r = reports_for(d);
    if (r.empty()) {
      throw IoError("no traces found under " + d);
    }
    reports.insert(reports.end(), r.begin(), r.end());
  }
  if (!out_path.empty()) {
    analysis::export_reports(reports, *format, out_path);
    out << fmt::format("wrote {} report row(s) to {}\n", reports.size(), out_path);
  } else {
    out << (*format == analysis::ExportFormat::Csv ? analysis::to_csv(reports)
                                                   : analysis::to_json_text(reports));
  }
  return kExitOk;
}

// --- inspect-memory ----------------------------------------------------------------------------

int cmd_inspect_memory(
  const std::string & path, const std::vector<double> & query, int k, int show,
  std::ostream & out)
{
  const auto bank = memory::load(path);
  out << fmt::format("bank: {}\nentries: {}\n", path, bank.size());
  std::map<std::string, int> by_action;
  std::map<std::string, int> by_scenario;
  for (const auto & e : bank.entries) {
    ++by_action[std::string(action_name(e.action))];
    ++by_scenario[e.meta.scenario];
  }
  for (const auto & [name, count] : by_action) {
    out << fmt::format("  action {}: {}\n", name, count);
  }
  for (const auto & [name, count] : by_scenario) {
    out << fmt::format("  scenario {}: {}\n", name, count);
  }
  for (int i = 0; i < show && i < static_cast<int>(bank.size()); ++i) {
    out << fmt::format("\n[{}]\n{}\n", i, memory::to_template(bank.entries[i]));
  }
  if (!query.empty()) {
    if (query.size() != memory::kFeatureCount) {
      throw CLI::ValidationError("--query", "expects 5 values: dx,dy,v_ego,v_ped,ttc");
    }
    memory::FeatureVector q;
    std::copy(query.begin(), query.end(), q.values.begin());
    out << fmt::format(
      "\nquery ({}), {} regime:\n", fmt::join(q.values, ", "),
      memory::is_near_conflict(q, bank.config.conflict_rule) ? "conflict" : "base");
    for (const auto & n : memory::retrieve(bank, q, static_cast<std::size_t>(k))) {
      out << fmt::format(
        "  #{} d={:.4f} {} ({}, seed {}, step {})\n", n.index, n.distance,
        action_name(n.entry->action), n.entry->meta.scenario, n.entry->meta.seed,
        n.entry->meta.step);
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Pedestrian-aware tactical driving simulation harness", "pedplan"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto * run_cmd = app.add_subcommand("run", "Run a batch of episodes for a preset or recipe");
  run_cmd->add_option("preset", run_opts.preset, "Scenario preset");
  run_cmd->add_option("--recipe", run_opts.recipe, "Experiment recipe: exp1, exp2, exp3 or exp4");
  run_cmd->add_option("--policy", run_opts.policy, "llm, rule, mock or recorded")
    ->capture_default_str();
  run_cmd->add_option("--seeds", run_opts.seeds, "Seeds: 7, 0..49 or 1,2,3; repeatable")
    ->capture_default_str();
  run_cmd->add_option("--memory", run_opts.memory, "Memory bank (JSONL) for few-shot prompts");
  run_cmd->add_option("--pipeline", run_opts.pipeline, "Pipeline depth 0 or 1")
    ->check(CLI::Range(0, 1));
  run_cmd->add_option("--out", run_opts.out_dir, "Output root")->capture_default_str();
  run_cmd->add_option("--run-id", run_opts.run_id, "Run directory name");
  run_cmd->add_option("--template", run_opts.template_file, "Prompt template file");
  run_cmd->add_option("--parallelism", run_opts.parallelism, "Concurrent episodes")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--fixtures", run_opts.fixtures, "Recorded-response directory");
  run_cmd->add_option("--record", run_opts.record_dir, "Store every response under this directory");
  run_cmd->add_option("--mock-action", run_opts.mock_action, "Action returned by the mock policy")
    ->capture_default_str();
  run_cmd->add_option("--mock-delay", run_opts.mock_delay, "Mock policy delay [s]");
  add_config_options(run_cmd, run_opts.cfg);

  std::string trace_dir;
  std::string bank_out;
  ConfigOptions bm_cfg;
  auto * bm_cmd = app.add_subcommand("build-memory", "Build a memory bank from trace files");
  bm_cmd->add_option("trace_dir", trace_dir, "Directory of episode traces")->required();
  bm_cmd->add_option("--out", bank_out, "Output bank (JSONL)")->required();
  add_config_options(bm_cmd, bm_cfg);

  std::vector<std::string> replay_paths;
  std::optional<double> replay_dt;
  double replay_tol = 1e-9;
  auto * rp_cmd = app.add_subcommand("replay", "Re-simulate traces and check them step by step");
  rp_cmd->add_option("trace", replay_paths, "Trace files or directories")->required();
  rp_cmd->add_option("--dt", replay_dt, "Override the integration step");
  rp_cmd->add_option("--tolerance", replay_tol, "Absolute tolerance")->capture_default_str();

  std::vector<std::string> report_dirs;
  std::string report_format = "csv";
  std::string report_out;
  auto * rep_cmd = app.add_subcommand("report", "Aggregate run directories into a report");
  rep_cmd->add_option("run_dir", report_dirs, "Run directories")->required();
  rep_cmd->add_option("--format", report_format, "csv or json")->capture_default_str();
  rep_cmd->add_option("--out", report_out, "Output file (default: stdout)");

  std::string bank_path;
  std::vector<double> query;
  int k = 3;
  int show = 0;
  auto * im_cmd = app.add_subcommand("inspect-memory", "Summarize a memory bank");
  im_cmd->add_option("bank", bank_path, "Bank file (JSONL)")->required();
  im_cmd->add_option("--query", query, "Retrieve neighbours of dx,dy,v_ego,v_ped,ttc")
    ->delimiter(',');
  im_cmd->add_option("--k", k, "Neighbours to show")->check(CLI::PositiveNumber);
  im_cmd->add_option("--show", show, "Print the first N entries as prompt text");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      return cmd_run(run_opts, out, err);
    }
    if (*bm_cmd) {
      return cmd_build_memory(trace_dir, bank_out, bm_cfg, out, err);
    }
    if (*rp_cmd) {
      return cmd_replay(replay_paths, replay_dt, replay_tol, out, err);
    }
    if (*rep_cmd) {
      return cmd_report(report_dirs, report_format, report_out, out);
    }
    if (*im_cmd) {
      return cmd_inspect_memory(bank_path, query, k, show, out);
    }
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError & e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError & e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError & e) {
    err << "format error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error & e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitUsage;
}

int run(int argc, char ** argv, std::ostream & out, std::ostream & err)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run(args, out, err);
}

}  // namespace pedplan::cli
