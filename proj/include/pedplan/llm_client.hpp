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

#ifndef PEDPLAN__LLM_CLIENT_HPP_
#define PEDPLAN__LLM_CLIENT_HPP_

#include "pedplan/policy.hpp"

#include <json.hpp>

#include <memory>
#include <semaphore>
#include <string>

// Chat-completion client over HTTP. Request and response follow the OpenAI-compatible shape
// served by common local inference servers (see docs/wire_protocol.md).
namespace pedplan::policy
{

struct LlmClientConfig
{
  std::string endpoint_url = "http://127.0.0.1:8080/v1/chat/completions";
  std::string model_name = "gemma3-1b";
  double temperature = 0.0;
  double top_p = 0.9;
  int max_tokens = 2000;
  double timeout_s = 30.0;  // per attempt
  int retries = 2;
  double backoff_s = 0.2;   // before retry n: backoff_s * 2^(n-1)
  int max_in_flight = 4;
  std::string api_key;  // never serialized

  void validate() const;
};

struct Endpoint
{
  std::string host;
  int port = 80;
  std::string path;

  std::string origin() const;
};

/// Accepts `http://host[:port]/path`. Anything else is a ConfigError.
Endpoint parse_endpoint(std::string_view url);

nlohmann::json build_chat_request(
  const prompting::PromptBundle & prompt, const LlmClientConfig & cfg);

/// First text block of the first choice; handles both string and array-of-parts content.
std::optional<std::string> extract_reply_text(const nlohmann::json & response);

/// One request with retries. Transport failures and timeouts yield the safety fallback.
DecisionResult decide_llm(const DecisionRequest & req, const LlmClientConfig & cfg);

class LlmPolicy : public DecisionPolicy
{
public:
  explicit LlmPolicy(LlmClientConfig cfg);

  /// True when something answers HTTP at the endpoint's origin.
  bool probe(double timeout_s = 2.0) const;

  DecisionResult decide(const DecisionContext & ctx) override;
  std::string kind() const override { return "llm"; }
  const LlmClientConfig & config() const { return cfg_; }

private:
  LlmClientConfig cfg_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace pedplan::policy

#endif  // PEDPLAN__LLM_CLIENT_HPP_
