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

#include "pedplan/llm_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace pedplan::policy
{

void LlmClientConfig::validate() const
{
  parse_endpoint(endpoint_url);
  if (model_name.empty()) {
    throw ConfigError("llm: model_name must not be empty");
  }
  if (!(timeout_s > 0.0)) {
    throw ConfigError("llm: timeout must be > 0");
  }
  if (backoff_s < 0.0) {
    throw ConfigError("llm: backoff_s must be >= 0");
  }
  if (retries < 0) {
    throw ConfigError("llm: retries must be >= 0");
  }
  if (max_in_flight < 1) {
    throw ConfigError("llm: max_in_flight must be >= 1");
  }
  if (max_tokens < 1) {
    throw ConfigError("llm: max_tokens must be >= 1");
  }
}

std::string Endpoint::origin() const { return "http://" + host + ":" + std::to_string(port); }

Endpoint parse_endpoint(std::string_view url)
{
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw ConfigError(
      "llm: endpoint must start with http:// (got '" + std::string(url) + "')");
  }
  auto rest = url.substr(scheme.size());
  const auto slash = rest.find('/');
  const auto authority = rest.substr(0, slash);
  Endpoint ep;
  ep.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));

  const auto colon = authority.rfind(':');
  if (colon == std::string_view::npos) {
    ep.host = std::string(authority);
  } else {
    ep.host = std::string(authority.substr(0, colon));
    const auto port_text = authority.substr(colon + 1);
    if (port_text.empty() ||
        !std::all_of(port_text.begin(), port_text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ConfigError("llm: bad port in endpoint '" + std::string(url) + "'");
    }
    ep.port = std::stoi(std::string(port_text));
    if (ep.port < 1 || ep.port > 65535) {
      throw ConfigError("llm: port out of range in endpoint '" + std::string(url) + "'");
    }
  }
  if (ep.host.empty()) {
    throw ConfigError("llm: missing host in endpoint '" + std::string(url) + "'");
  }
  return ep;
}

nlohmann::json build_chat_request(const prompting::PromptBundle & prompt, const LlmClientConfig & cfg)
{
  return {
    {"model", cfg.model_name},
    {"messages",
     {{{"role", "system"}, {"content", prompt.system_text}},
      {{"role", "user"}, {"content", prompt.user_text()}}}},
    {"temperature", cfg.temperature},
    {"top_p", cfg.top_p},
    {"max_tokens", cfg.max_tokens},
    {"stream", false},
  };
}

std::optional<std::string> extract_reply_text(const nlohmann::json & response)
{
  if (!response.is_object()) {
    return std::nullopt;
  }
  const auto choices = response.find("choices");
  if (choices == response.end() || !choices->is_array() || choices->empty()) {
    return std::nullopt;
  }
  const auto & first = (*choices)[0];
  if (!first.is_object()) {
    return std::nullopt;
  }
  const nlohmann::json * content = nullptr;
  if (const auto msg = first.find("message"); msg != first.end() && msg->is_object()) {
    if (const auto c = msg->find("content"); c != msg->end()) {
      content = &*c;
    }
  } else if (const auto text = first.find("text"); text != first.end()) {
    content = &*text;
  }
  if (!content) {
    return std::nullopt;
  }
  if (content->is_string()) {
    return content->get<std::string>();
  }
  if (content->is_array()) {
    for (const auto & part : *content) {
      if (part.is_object() && part.value("type", "") == "text" && part.contains("text") &&
          part["text"].is_string()) {
        return part["text"].get<std::string>();
      }
    }
  }
  return std::nullopt;
}

namespace
{

using Clock = std::chrono::steady_clock;

void set_timeouts(httplib::Client & client, double seconds)
{
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(
    std::chrono::duration<double>(std::max(seconds, 0.001)));
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

DecisionResult decide_llm(const DecisionRequest & req, const LlmClientConfig & cfg)
{
  const auto ep = parse_endpoint(cfg.endpoint_url);
  const auto started = Clock::now();
  const double budget =
    std::min(req.deadline_s > 0.0 ? req.deadline_s : cfg.timeout_s * (cfg.retries + 1),
             cfg.timeout_s * (cfg.retries + 1));
  const std::string body = build_chat_request(req.prompt, cfg).dump();

  httplib::Headers headers;
  if (!cfg.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + cfg.api_key);
  }

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    if (attempt > 0 && cfg.backoff_s > 0.0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
      const double pause = std::min(cfg.backoff_s * std::ldexp(1.0, attempt - 1), budget - elapsed);
      if (pause > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(pause));
      }
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
    const double remaining = budget - elapsed;
    if (remaining <= 0.0) {
      last_error = "deadline exceeded";
      break;
    }
    httplib::Client client(ep.host, ep.port);
    set_timeouts(client, std::min(cfg.timeout_s, remaining));
    auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (retryable_status(res->status)) {
        continue;
      }
      break;
    }
    std::optional<std::string> text;
    try {
      text = extract_reply_text(nlohmann::json::parse(res->body));
    } catch (const nlohmann::json::exception &) {
      text.reset();
    }
    if (!text) {
      last_error = "malformed response body";
      break;
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
  return fallback_result("llm request failed: " + last_error);
}

LlmPolicy::LlmPolicy(LlmClientConfig cfg)
: cfg_(std::move(cfg))
{
  cfg_.validate();
  in_flight_ = std::make_unique<std::counting_semaphore<>>(cfg_.max_in_flight);
}

bool LlmPolicy::probe(double timeout_s) const
{
  const auto ep = parse_endpoint(cfg_.endpoint_url);
  httplib::Client client(ep.host, ep.port);
  set_timeouts(client, timeout_s);
  return static_cast<bool>(client.Get("/"));
}

DecisionResult LlmPolicy::decide(const DecisionContext & ctx)
{
  in_flight_->acquire();
  struct Release
  {
    std::counting_semaphore<> & sem;
    ~Release() { sem.release(); }
  } release{*in_flight_};
  return decide_llm(ctx.request, cfg_);
}

}  // namespace pedplan::policy
