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

#ifndef PEDPLAN_TESTS__FAKE_LLM_SERVER_HPP_
#define PEDPLAN_TESTS__FAKE_LLM_SERVER_HPP_

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pedplan::testing
{

/// Local chat-completions endpoint on an ephemeral port.
class FakeLlmServer
{
public:
  struct Reply
  {
    int status = 200;
    std::string body;
    double delay_s = 0.0;
  };
  using Handler = std::function<Reply(const nlohmann::json & request, int call_index)>;

  static Reply content(const std::string & text)
  {
    nlohmann::json body = {
      {"id", "cmpl-test"},
      {"object", "chat.completion"},
      {"choices",
       {{{"index", 0},
         {"message", {{"role", "assistant"}, {"content", text}}},
         {"finish_reason", "stop"}}}}};
    return {200, body.dump(), 0.0};
  }

  explicit FakeLlmServer(Handler handler) : handler_(std::move(handler))
  {
    server_.Get("/", [](const httplib::Request &, httplib::Response & res) {
      res.set_content("ok", "text/plain");
    });
    server_.Post("/v1/chat/completions", [this](const httplib::Request & req, httplib::Response & res) {
      const int index = calls_++;
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception &) {
        parsed = nullptr;
      }
      {
        std::lock_guard<std::mutex> lock(mutex_);
        requests_.push_back(parsed);
        auth_headers_.push_back(req.get_header_value("Authorization"));
      }
      const auto reply = handler_(parsed, index);
      if (reply.delay_s > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(reply.delay_s));
      }
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this]() { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeLlmServer()
  {
    server_.stop();
    if (thread_.joinable()) {
      thread_.join();
    }
  }

  FakeLlmServer(const FakeLlmServer &) = delete;
  FakeLlmServer & operator=(const FakeLlmServer &) = delete;

  std::string url() const
  {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  int calls() const { return calls_.load(); }
  std::vector<nlohmann::json> requests() const
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
  }
  std::vector<std::string> auth_headers() const
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return auth_headers_;
  }

private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> requests_;
  std::vector<std::string> auth_headers_;
};

}  // namespace pedplan::testing

#endif  // PEDPLAN_TESTS__FAKE_LLM_SERVER_HPP_
