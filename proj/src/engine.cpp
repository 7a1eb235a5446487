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

#include "pedplan/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <mutex>
#include <thread>

namespace pedplan::engine
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

EpisodeSimulator::EpisodeSimulator(
  const behaviors::ScenarioConfig & scenario, const config::SimConfig & sim)
: scenario_(scenario), sim_(sim)
{
  scenario_.validate();
  sim_.validate();
  ego_ = scenario_.ego_start;
  agents_ = behaviors::spawn_pedestrians(scenario_);
  max_steps_ = std::min(sim_.engine.max_steps, scenario_.max_steps);
  update_outcome(make_record());
}

std::vector<world::PedestrianState> EpisodeSimulator::pedestrians() const
{
  std::vector<world::PedestrianState> out;
  out.reserve(agents_.size());
  for (const auto & a : agents_) {
    out.push_back(a.state);
  }
  return out;
}

prompting::Observation EpisodeSimulator::observe() const
{
  prompting::WorldSnapshot snap;
  snap.ego = ego_;
  snap.pedestrians = pedestrians();
  snap.road = scenario_.road;
  snap.motion = sim_.motion;
  snap.speed_limit = sim_.speed_limit;
  snap.conflict_radius = sim_.ttc_conflict_radius;
  snap.step = step_;
  return prompting::build_observation(snap);
}

StepRecord EpisodeSimulator::make_record() const
{
  StepRecord rec;
  rec.step = step_;
  rec.cycle = cycle_;
  rec.ego = ego_;
  rec.pedestrians = pedestrians();
  rec.command = command_;
  for (const auto & p : rec.pedestrians) {
    const double d = world::min_distance(ego_, p, sim_.motion);
    rec.min_distance = rec.min_distance ? std::min(*rec.min_distance, d) : d;
    rec.min_ttc = std::min(rec.min_ttc, world::compute_ttc(ego_, p, sim_.ttc_conflict_radius));
  }
  return rec;
}

StepRecord EpisodeSimulator::initial_record() const
{
  StepRecord rec = make_record();
  rec.step = 0;
  rec.cycle = 0;
  rec.command = {};
  return rec;
}

void EpisodeSimulator::update_outcome(const StepRecord & rec)
{
  if (rec.min_distance && *rec.min_distance <= 0.0) {
    outcome_ = Outcome::Collision;
  } else if (rec.ego.x >= sim_.engine.goal_x) {
    outcome_ = Outcome::Success;
  } else if (rec.step >= max_steps_) {
    outcome_ = Outcome::Timeout;
  }
}

const world::ActionCommand & EpisodeSimulator::apply(Action action, int cycle)
{
  command_ = world::action_to_command(action, ego_, scenario_.road, sim_.motion);
  cycle_ = cycle;
  return command_;
}

StepRecord EpisodeSimulator::tick()
{
  if (done()) {
    throw std::logic_error("tick after episode end");
  }
  const world::VehicleState before = ego_;
  ego_ = world::step_vehicle(ego_, command_, sim_.motion, scenario_.road);
  for (auto & agent : agents_) {
    agent = behaviors::step_pedestrian(std::move(agent), before, sim_.motion.dt);
  }
  ++step_;
  StepRecord rec = make_record();
  update_outcome(rec);
  return rec;
}

namespace
{

struct PreparedDecision
{
  policy::DecisionContext ctx;
  std::string prompt_hash;
  std::vector<std::size_t> retrieved;
};

PreparedDecision prepare(
  const EpisodeSimulator & sim, const behaviors::ScenarioConfig & scenario,
  const RunSetup & setup, int index)
{
  PreparedDecision d;
  d.ctx.observation = sim.observe();
  d.ctx.decision_index = index;

  std::vector<memory::MemoryEntry> fewshot;
  if (setup.memory && !setup.memory->empty()) {
    const auto & mem = setup.sim.memory;
    const auto query = memory::query_features(
      d.ctx.observation.ego, d.ctx.observation.pedestrians, setup.sim.ttc_conflict_radius,
      mem.ttc_cap, mem.attention_radius);
    if (query) {
      for (const auto & n : memory::retrieve(*setup.memory, *query, mem.k)) {
        fewshot.push_back(*n.entry);
        d.retrieved.push_back(n.index);
        d.ctx.retrieved_actions.push_back(n.entry->action);
      }
    }
  }

  d.ctx.request.prompt = prompting::render_prompt(
    d.ctx.observation, prompting::instruction_for_preset(scenario.preset), fewshot,
    setup.prompt_template);
  d.ctx.request.deadline_s = setup.sim.engine.decision_deadline;
  d.ctx.request.request_id = fmt::format("{}-{}", scenario.seed, index);
  d.prompt_hash = policy::request_hash(d.ctx.request.prompt);
  return d;
}

policy::DecisionResult invoke(policy::DecisionPolicy & policy, const policy::DecisionContext & ctx)
{
  const auto start = Clock::now();
  policy::DecisionResult result;
  try {
    result = policy.decide(ctx);
  } catch (const std::exception & e) {
    result = policy::fallback_result(fmt::format("policy error: {}", e.what()));
  }
  result.latency_s = seconds_since(start);
  return result;
}

DecisionRecord make_decision_record(
  const PreparedDecision & prepared, const policy::DecisionResult & result, int apply_step,
  int horizon)
{
  DecisionRecord rec;
  rec.index = prepared.ctx.decision_index;
  rec.request_id = prepared.ctx.request.request_id;
  rec.obs_step = prepared.ctx.observation.step;
  rec.apply_step = apply_step;
  rec.staleness = (apply_step - rec.obs_step) / horizon;
  rec.prompt_hash = prepared.prompt_hash;
  rec.raw_text = result.raw_text;
  rec.action = result.action;
  rec.parse_ok = result.parse_ok;
  rec.latency_s = result.latency_s;
  rec.source = result.source;
  rec.retrieved = prepared.retrieved;
  return rec;
}

}  // namespace

EpisodeTrace run_episode(
  const behaviors::ScenarioConfig & scenario, policy::DecisionPolicy & policy,
  const RunSetup & setup)
{
  const auto & ecfg = setup.sim.engine;
  EpisodeSimulator sim(scenario, setup.sim);

  EpisodeTrace trace;
  trace.seed = scenario.seed;
  trace.preset = scenario.preset;
  trace.policy = policy.kind();
  trace.template_version = setup.prompt_template.version();
  trace.config = config::to_json(setup.sim);
  trace.config_hash = config::config_hash(trace.config);
  trace.scenario = scenario;
  trace.steps.push_back(sim.initial_record());

  struct InFlight
  {
    PreparedDecision prepared;
    std::future<policy::DecisionResult> result;
  };
  std::optional<InFlight> pending;

  const auto tick_wall = std::chrono::duration<double>(ecfg.tick_wall_time);
  for (int cycle = 0; !sim.done(); ++cycle) {
    PreparedDecision prepared;
    policy::DecisionResult result;
    if (pending) {
      result = pending->result.get();
      prepared = std::move(pending->prepared);
      pending.reset();
    } else {
      prepared = prepare(sim, scenario, setup, cycle);
      result = invoke(policy, prepared.ctx);
    }
    trace.decisions.push_back(make_decision_record(prepared, result, sim.step(), ecfg.horizon_steps));
    sim.apply(result.action, cycle);

    if (ecfg.pipeline_depth == 1) {
      InFlight next{prepare(sim, scenario, setup, cycle + 1), {}};
      next.result = std::async(
        std::launch::async, [&policy, ctx = next.prepared.ctx]() { return invoke(policy, ctx); });
      pending = std::move(next);
    }

    const auto cycle_start = Clock::now();
    for (int i = 0; i < ecfg.horizon_steps && !sim.done(); ++i) {
      trace.steps.push_back(sim.tick());
      if (ecfg.tick_wall_time > 0.0) {
        std::this_thread::sleep_until(
          cycle_start + std::chrono::duration_cast<Clock::duration>(tick_wall * (i + 1)));
      }
    }
  }
  if (pending) {
    pending->result.wait();
  }
  trace.outcome = *sim.outcome();
  return trace;
}

std::vector<EpisodeResult> run_batch(
  const std::string & preset, const std::vector<std::uint64_t> & seeds,
  policy::DecisionPolicy & policy, const RunSetup & setup, int parallelism,
  const EpisodeCallback & on_done)
{
  if (parallelism < 1) {
    throw ConfigError("parallelism must be >= 1");
  }
  if (!behaviors::is_preset(preset)) {
    throw ConfigError(fmt::format("unknown preset '{}'", preset));
  }
  setup.sim.validate();

  std::vector<EpisodeResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      auto & r = results[i];
      r.seed = seeds[i];
      try {
        const auto scenario = behaviors::make_preset(
          preset, seeds[i], setup.sim.pedestrian, setup.sim.road, setup.sim.ego_start,
          setup.sim.engine.max_steps);
        r.trace = run_episode(scenario, policy, setup);
      } catch (const std::exception & e) {
        r.error = e.what();
      }
      if (on_done) {
        std::lock_guard<std::mutex> lock(done_mutex);
        on_done(r);
      }
    }
  };

  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(parallelism), seeds.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  return results;
}

LatencySummary measure_latency(const std::vector<EpisodeTrace> & traces)
{
  LatencySummary s;
  double sum = 0.0;
  for (const auto & t : traces) {
    for (const auto & d : t.decisions) {
      if (s.count == 0) {
        s.min = s.max = d.latency_s;
      }
      s.min = std::min(s.min, d.latency_s);
      s.max = std::max(s.max, d.latency_s);
      sum += d.latency_s;
      ++s.count;
    }
  }
  if (s.count == 0) {
    return s;
  }
  s.empty = false;
  s.avg = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto & t : traces) {
      for (const auto & d : t.decisions) {
        ss += (d.latency_s - s.avg) * (d.latency_s - s.avg);
      }
    }
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

nlohmann::json to_json(const LatencySummary & s)
{
  if (s.empty) {
    return {{"empty", true}, {"count", 0}};
  }
  return {{"empty", false}, {"count", s.count}, {"avg", s.avg},
          {"max", s.max},   {"min", s.min},     {"std", s.std}};
}

namespace
{

std::optional<std::string> compare_records(
  const StepRecord & want, const StepRecord & got, double tol)
{
  auto near = [tol](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) {
      return a == b;
    }
    return std::abs(a - b) <= tol;
  };
  const auto & a = want.ego;
  const auto & b = got.ego;
  if (!near(a.x, b.x) || !near(a.y, b.y) || !near(a.v, b.v) || !near(a.theta, b.theta) ||
      a.lane != b.lane) {
    return fmt::format(
      "ego state differs: recorded (x={}, y={}, v={}, theta={}, lane={}) vs replayed (x={}, "
      "y={}, v={}, theta={}, lane={})",
      a.x, a.y, a.v, a.theta, a.lane, b.x, b.y, b.v, b.theta, b.lane);
  }
  const auto & c = want.command;
  const auto & d = got.command;
  if (c.action != d.action || c.degraded != d.degraded || !near(c.v_target, d.v_target) ||
      !near(c.theta_target, d.theta_target)) {
    return fmt::format(
      "command differs: recorded {} (v_target={}, theta_target={}) vs replayed {} (v_target={}, "
      "theta_target={})",
      action_name(c.action), c.v_target, c.theta_target, action_name(d.action), d.v_target,
      d.theta_target);
  }
  if (want.pedestrians.size() != got.pedestrians.size()) {
    return std::string("pedestrian count differs");
  }
  for (std::size_t i = 0; i < want.pedestrians.size(); ++i) {
    const auto & p = want.pedestrians[i];
    const auto & q = got.pedestrians[i];
    if (p.id != q.id || !near(p.x, q.x) || !near(p.y, q.y) || !near(p.vx, q.vx) ||
        !near(p.vy, q.vy)) {
      return fmt::format(
        "pedestrian {} differs: recorded ({}, {}) vs replayed ({}, {})", p.id, p.x, p.y, q.x, q.y);
    }
  }
  return std::nullopt;
}

}  // namespace

ReplayReport replay(const EpisodeTrace & trace, const ReplayOptions & options)
{
  if (trace.steps.empty()) {
    throw FormatError("trace has no step records");
  }
  auto sim_cfg = config::from_json(trace.config);
  if (options.dt_override) {
    sim_cfg.motion.dt = *options.dt_override;
  }
  EpisodeSimulator sim(trace.scenario, sim_cfg);

  ReplayReport report;
  auto diverge = [&](int step, std::string detail) {
    report.verified = false;
    report.divergent_step = step;
    report.detail = std::move(detail);
    return report;
  };

  if (auto diff = compare_records(trace.steps.front(), sim.initial_record(), options.tolerance)) {
    return diverge(0, *diff);
  }
  std::size_t next_step = 1;
  for (std::size_t n = 0; n < trace.decisions.size() && !sim.done(); ++n) {
    const auto & d = trace.decisions[n];
    if (d.apply_step != sim.step()) {
      return diverge(
        sim.step(), fmt::format(
                      "decision {} was applied at step {} but the replay reached a decision "
                      "boundary at step {}",
                      n, d.apply_step, sim.step()));
    }
    sim.apply(d.action, static_cast<int>(n));
    for (int i = 0; i < sim_cfg.engine.horizon_steps && !sim.done(); ++i) {
      const auto rec = sim.tick();
      if (next_step >= trace.steps.size()) {
        return diverge(rec.step, "replay runs past the end of the recorded trace");
      }
      if (auto diff = compare_records(trace.steps[next_step], rec, options.tolerance)) {
        return diverge(rec.step, *diff);
      }
      ++next_step;
    }
  }
  if (!sim.done()) {
    return diverge(sim.step(), "recorded decisions end before the episode terminates");
  }
  if (next_step != trace.steps.size()) {
    return diverge(
      static_cast<int>(next_step), "recorded trace continues after the replayed episode ended");
  }
  if (*sim.outcome() != trace.outcome) {
    return diverge(
      sim.step(), fmt::format(
                    "outcome differs: recorded {} vs replayed {}", outcome_name(trace.outcome),
                    outcome_name(*sim.outcome())));
  }
  report.verified = true;
  report.detail = fmt::format("{} steps verified", trace.steps.size());
  return report;
}

}  // namespace pedplan::engine
