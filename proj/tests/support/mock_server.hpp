#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <iterator>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fable/rng.hpp"
#include "fable/sha256.hpp"

namespace fable::testing {

/// In-process chat-completions endpoint. Generation requests get a small
/// deterministic fable derived from the prompt text; rubric requests get a
/// structured critic reply. Latency, failure injection, and usage omission
/// are knobs for exercising the gateway contract.
struct MockOptions {
  int latency_ms = 0;
  int fail_first = 0;
  int fail_every = 0;
  int fail_after = -1;
  int garbage_first = 0;
  bool omit_usage = false;
  std::int64_t prompt_tokens = 181;
  std::int64_t completion_tokens = 337;
};

class MockEndpoint {
 public:
  using Options = MockOptions;

  explicit MockEndpoint(Options options = {}) : options_(options) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   handle(req, res);
                 });
  }

  ~MockEndpoint() { stop(); }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this]() { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  int max_concurrent() const { return max_concurrent_.load(); }
  int request_count() const { return requests_seen_.load(); }

  std::vector<nlohmann::json> captured() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return captured_;
  }

  /// The reply the mock would generate for a user prompt; lets tests
  /// predict output without going over the wire.
  static std::string reply_for(const std::string& user_prompt) {
    if (user_prompt.find("Answer with a single JSON object") != std::string::npos) {
      return critic_reply(user_prompt);
    }
    return fable_reply(user_prompt);
  }

 private:
  static std::uint64_t prompt_seed(const std::string& text) {
    const auto hex = sha256_hex(text);
    std::uint64_t seed = 0;
    for (int i = 0; i < 16; ++i) {
      seed = seed * 16 + static_cast<std::uint64_t>(
                             hex[i] <= '9' ? hex[i] - '0' : hex[i] - 'a' + 10);
    }
    return seed;
  }

  static std::string fable_reply(const std::string& user_prompt) {
    static const char* kNouns[] = {"fox",  "river", "lantern", "meadow", "sparrow",
                                   "stone", "willow", "badger", "harvest", "storm"};
    static const char* kVerbs[] = {"wandered", "listened", "shared",  "guarded",
                                   "carried",  "followed", "watched", "mended"};
    static const char* kAdjectives[] = {"quiet", "golden", "weary", "gentle",
                                        "clever", "stubborn", "bright"};
    Rng rng(prompt_seed(user_prompt));
    std::string text = "Once upon a time, a creature set out at dawn.";
    const auto sentences = 5 + rng.below(6);
    for (std::uint64_t s = 0; s < sentences; ++s) {
      text += " The ";
      text += kAdjectives[rng.below(std::size(kAdjectives))];
      text += " ";
      text += kNouns[rng.below(std::size(kNouns))];
      text += " ";
      text += kVerbs[rng.below(std::size(kVerbs))];
      text += " near the ";
      text += kNouns[rng.below(std::size(kNouns))];
      text += ".";
    }
    text += " And so everyone learned that patience rewards the ";
    text += kAdjectives[rng.below(std::size(kAdjectives))];
    text += ".";
    return text;
  }

  static std::string critic_reply(const std::string& user_prompt) {
    Rng rng(prompt_seed(user_prompt));
    const auto grammar = 6 + rng.below(5);
    const auto creativity = 5 + rng.below(5);
    const auto moral = 6 + rng.below(5);
    const auto adherence = 5 + rng.below(6);
    const char age = rng.below(10) < 9 ? 'B' : 'C';
    nlohmann::json reply = {{"grammar", grammar},
                            {"creativity", creativity},
                            {"moral_clarity", moral},
                            {"adherence", adherence},
                            {"age_group", std::string(1, age)}};
    return reply.dump();
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    const int now = concurrent_.fetch_add(1) + 1;
    int seen = max_concurrent_.load();
    while (now > seen && !max_concurrent_.compare_exchange_weak(seen, now)) {
    }
    const int request_index = requests_seen_.fetch_add(1);

    if (options_.latency_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(options_.latency_ms));
    }

    nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      captured_.push_back(body);
    }

    const bool inject_fail =
        request_index < options_.fail_first ||
        (options_.fail_every > 0 && (request_index + 1) % options_.fail_every == 0) ||
        (options_.fail_after >= 0 && request_index >= options_.fail_after);
    if (inject_fail) {
      res.status = 500;
      res.set_content("{\"error\":\"injected failure\"}", "application/json");
      concurrent_.fetch_sub(1);
      return;
    }

    std::string user_prompt;
    if (body.is_object() && body.contains("messages") && body["messages"].is_array()) {
      for (const auto& message : body["messages"]) {
        if (message.value("role", "") == "user") user_prompt = message.value("content", "");
      }
    }

    const std::string content = request_index < options_.garbage_first
                                    ? std::string("A charming story, well told.")
                                    : reply_for(user_prompt);

    nlohmann::json reply = {
        {"id", "mock-1"},
        {"object", "chat.completion"},
        {"model", body.is_object() ? body.value("model", "mock") : "mock"},
        {"choices",
         {{{"index", 0},
           {"message", {{"role", "assistant"}, {"content", content}}},
           {"finish_reason", "stop"}}}},
    };
    if (!options_.omit_usage) {
      reply["usage"] = {{"prompt_tokens", options_.prompt_tokens},
                        {"completion_tokens", options_.completion_tokens},
                        {"total_tokens", options_.prompt_tokens + options_.completion_tokens}};
    }
    res.status = 200;
    res.set_content(reply.dump(), "application/json");
    concurrent_.fetch_sub(1);
  }

  Options options_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> concurrent_{0};
  std::atomic<int> max_concurrent_{0};
  std::atomic<int> requests_seen_{0};
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> captured_;
};

}  // namespace fable::testing
