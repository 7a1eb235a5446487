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

#include "pedplan/prompting.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pedplan::prompting
{

namespace detail
{
extern const std::string_view kBuiltinTemplate;
}

double round2(double value)
{
  if (!std::isfinite(value)) {
    return value;
  }
  // + 0.0 turns a negative zero into a positive one so "-0.00" never shows up.
  return std::round(value * 100.0) / 100.0 + 0.0;
}

Observation build_observation(const WorldSnapshot & snapshot)
{
  Observation obs;
  obs.ego = snapshot.ego;
  obs.pedestrians = snapshot.pedestrians;
  obs.road = snapshot.road;
  obs.speed_limit = snapshot.speed_limit;
  obs.step = snapshot.step;

  const auto & e = snapshot.ego;
  obs.ego_view = {round2(e.x), round2(e.y), round2(e.v), round2(e.theta), e.lane};
  obs.derived.reserve(snapshot.pedestrians.size());
  for (const auto & p : snapshot.pedestrians) {
    PedestrianView view;
    view.id = p.id;
    view.dx = round2(p.x - e.x);
    view.dy = round2(p.y - e.y);
    view.vx = round2(p.vx);
    view.vy = round2(p.vy);
    view.distance = round2(world::min_distance(e, p, snapshot.motion));
    view.ttc = round2(world::compute_ttc(e, p, snapshot.conflict_radius));
    obs.derived.push_back(view);
  }
  return obs;
}

PromptTemplate PromptTemplate::parse(std::string_view text)
{
  PromptTemplate tmpl;
  std::string current;
  std::vector<std::string> body;
  bool in_section = false;

  auto flush = [&]() {
    if (!in_section) {
      return;
    }
    while (!body.empty() && body.back().find_first_not_of(" \t") == std::string::npos) {
      body.pop_back();
    }
    std::string joined;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i > 0) {
        joined.push_back('\n');
      }
      joined += body[i];
    }
    tmpl.sections_[current] = std::move(joined);
    body.clear();
  };

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.rfind("@section ", 0) == 0) {
      flush();
      current = line.substr(9);
      if (current.empty() || tmpl.sections_.count(current) > 0) {
        throw FormatError("prompt template: bad or duplicate section at line " + std::to_string(line_no), line_no);
      }
      in_section = true;
      continue;
    }
    if (!in_section) {
      if (line.rfind("@version ", 0) == 0) {
        tmpl.version_ = line.substr(9);
      } else if (!line.empty() && line[0] != '#') {
        throw FormatError("prompt template: unexpected text at line " + std::to_string(line_no), line_no);
      }
      continue;
    }
    if (!body.empty() || !line.empty()) {
      body.push_back(std::move(line));
    }
  }
  flush();

  if (tmpl.version_.empty()) {
    throw FormatError("prompt template: missing @version");
  }
  for (const char * required :
       {"system", "scene", "pedestrian", "no_pedestrians", "instruction", "output_format",
        "fewshot_header"}) {
    if (!tmpl.has_section(required)) {
      throw FormatError(std::string("prompt template: missing section '") + required + "'");
    }
  }
  return tmpl;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read prompt template " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

PromptTemplate PromptTemplate::builtin() { return parse(detail::kBuiltinTemplate); }

const std::string & PromptTemplate::section(const std::string & name) const
{
  const auto it = sections_.find(name);
  if (it == sections_.end()) {
    throw FormatError("prompt template: no section '" + name + "'");
  }
  return it->second;
}

std::string PromptTemplate::render(
  const std::string & name, const std::map<std::string, std::string> & vars) const
{
  const auto & src = section(name);
  std::string out;
  out.reserve(src.size() + 64);
  std::size_t pos = 0;
  while (true) {
    const auto open = src.find("{{", pos);
    if (open == std::string::npos) {
      out.append(src, pos, std::string::npos);
      break;
    }
    const auto close = src.find("}}", open + 2);
    if (close == std::string::npos) {
      throw FormatError("prompt template: unterminated placeholder in section '" + name + "'");
    }
    out.append(src, pos, open - pos);
    const auto key = src.substr(open + 2, close - open - 2);
    const auto it = vars.find(key);
    if (it == vars.end()) {
      throw FormatError("prompt template: unknown placeholder {{" + key + "}} in '" + name + "'");
    }
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::string PromptBundle::user_text() const
{
  std::string out;
  if (!fewshot_blocks.empty()) {
    out += fewshot_header;
    out += "\n\n";
    for (const auto & block : fewshot_blocks) {
      out += block;
      out += "\n\n";
    }
  }
  out += scene_text;
  out += "\n\n";
  out += instruction_text;
  out += "\n\n";
  out += output_format_text;
  return out;
}

namespace
{

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string ttc_text(double ttc)
{
  if (std::isinf(ttc)) {
    return "none (paths do not conflict)";
  }
  return fmt::format("{:.2f} s", ttc);
}

}  // namespace

PromptBundle render_prompt(
  const Observation & obs, std::string_view instruction,
  std::span<const memory::MemoryEntry> fewshot, const PromptTemplate & tmpl)
{
  if (instruction.empty()) {
    throw ConfigError("prompt: instruction must not be empty");
  }
  PromptBundle b;
  b.template_version = tmpl.version();
  const std::string lanes = std::to_string(obs.road.lane_count);
  b.system_text = tmpl.render("system", {{"lane_count", lanes}});

  if (!fewshot.empty()) {
    b.fewshot_header = tmpl.render("fewshot_header", {});
    for (const auto & entry : fewshot) {
      b.fewshot_blocks.push_back(memory::to_template(entry));
    }
  }

  const auto & e = obs.ego_view;
  b.scene_text = tmpl.render(
    "scene", {{"step", std::to_string(obs.step)},
              {"ego_x", num(e.x)},
              {"ego_y", num(e.y)},
              {"ego_v", num(e.v)},
              {"ego_theta", num(e.theta)},
              {"ego_lane", std::to_string(e.lane)},
              {"lane_count", lanes},
              {"speed_limit", num(round2(obs.speed_limit))}});
  b.scene_text.push_back('\n');
  if (obs.derived.empty()) {
    b.scene_text += tmpl.render("no_pedestrians", {});
  } else {
    for (std::size_t i = 0; i < obs.derived.size(); ++i) {
      const auto & p = obs.derived[i];
      if (i > 0) {
        b.scene_text.push_back('\n');
      }
      b.scene_text += tmpl.render(
        "pedestrian", {{"id", std::to_string(p.id)},
                       {"dx", num(p.dx)},
                       {"dy", num(p.dy)},
                       {"vx", num(p.vx)},
                       {"vy", num(p.vy)},
                       {"distance", num(p.distance)},
                       {"ttc", ttc_text(p.ttc)}});
    }
  }

  b.instruction_text = tmpl.render("instruction", {{"instruction", std::string(instruction)}});
  b.output_format_text = tmpl.render("output_format", {});
  const auto chars = b.system_text.size() + b.user_text().size();
  b.token_estimate = static_cast<int>((chars + 3) / 4);
  return b;
}

std::string instruction_for_preset(std::string_view preset)
{
  const std::string base =
    "Drive to the end of the road; yield to pedestrians; obey the speed limit.";
  if (preset == "jaywalk") {
    return base + " Pedestrians waiting at the curb may step onto the road without warning.";
  }
  if (preset == "turn_back" || preset == "hesitation") {
    return base + " A crossing pedestrian may stop or change direction; slow down until their intent is clear.";
  }
  if (preset == "bidirectional" || preset == "three_peds") {
    return base + " Several pedestrians may be crossing at once; maintain your lane unless a change is clearly safer.";
  }
  return base + " Maintain your lane unless a change is clearly safer.";
}

}  // namespace pedplan::prompting
