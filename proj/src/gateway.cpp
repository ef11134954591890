#include "fable/gateway.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fable/error.hpp"
#include "fable/text.hpp"

namespace fable::gateway {
namespace {

struct ParsedUrl {
  std::string origin;
  std::string path_prefix;
};

ParsedUrl parse_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::invalid_input, "base_url must be absolute: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  auto prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

Errc transport_errc(httplib::Error err) {
  return err == httplib::Error::ConnectionTimeout ? Errc::timeout : Errc::transport_error;
}

struct AttemptOutcome {
  bool success = false;
  bool retryable = false;
  Errc code = Errc::transport_error;
  std::string detail;
  GenerationResult result;
};

AttemptOutcome run_attempt(const EndpointProfile& endpoint, const ParsedUrl& url,
                           const std::string& body, const RetryPolicy& retry,
                           const prompt::PromptRecord& prompt) {
  httplib::Client client(url.origin);
  const auto timeout_s = static_cast<time_t>(retry.timeout_seconds);
  const auto timeout_us =
      static_cast<time_t>((retry.timeout_seconds - static_cast<double>(timeout_s)) * 1e6);
  client.set_connection_timeout(timeout_s, timeout_us);
  client.set_read_timeout(timeout_s, timeout_us);
  client.set_write_timeout(timeout_s, timeout_us);

  httplib::Headers headers;
  if (!endpoint.auth_token_env_var.empty()) {
    if (const char* token = std::getenv(endpoint.auth_token_env_var.c_str());
        token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  AttemptOutcome out;
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(url.path_prefix + "/v1/chat/completions", headers, body,
                         "application/json");
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);

  if (!res) {
    out.retryable = true;
    out.code = transport_errc(res.error());
    out.detail = httplib::to_string(res.error());
    return out;
  }
  if (res->status < 200 || res->status >= 300) {
    out.retryable = retryable_status(res->status);
    out.code = Errc::endpoint_error;
    out.detail = "status " + std::to_string(res->status) + ": " + res->body;
    return out;
  }

  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) {
    out.code = Errc::malformed_response;
    out.detail = "response body is not a JSON object";
    return out;
  }
  const auto* content = [&]() -> const nlohmann::json* {
    auto choices = reply.find("choices");
    if (choices == reply.end() || !choices->is_array() || choices->empty()) return nullptr;
    const auto& first = (*choices)[0];
    if (!first.contains("message")) return nullptr;
    const auto& message = first["message"];
    if (!message.contains("content") || !message["content"].is_string()) return nullptr;
    return &message["content"];
  }();
  if (!content) {
    out.code = Errc::malformed_response;
    out.detail = "response carries no message content";
    return out;
  }

  GenerationResult result;
  result.text = content->get<std::string>();
  const auto usage = reply.find("usage");
  const bool has_usage = usage != reply.end() && usage->is_object() &&
                         usage->contains("prompt_tokens") && usage->contains("completion_tokens") &&
                         (*usage)["prompt_tokens"].is_number_integer() &&
                         (*usage)["completion_tokens"].is_number_integer();
  if (has_usage) {
    result.input_tokens = (*usage)["prompt_tokens"].get<std::int64_t>();
    result.output_tokens = (*usage)["completion_tokens"].get<std::int64_t>();
  } else if (retry.estimate_missing_usage) {
    result.input_tokens =
        estimate_tokens(prompt.system_message) + estimate_tokens(prompt.user_prompt);
    result.output_tokens = estimate_tokens(result.text);
    result.usage_estimated = true;
  } else {
    out.code = Errc::malformed_response;
    out.detail = "response omits usage token counts";
    return out;
  }
  result.inference_time = std::max(elapsed.count(), 1e-6);
  result.finished_at = fable::text::utc_now_rfc3339();
  out.success = true;
  out.result = std::move(result);
  return out;
}

}  // namespace

void validate(const DecodingConfig& config) {
  if (config.temperature < 0.0 || config.temperature > 2.0) {
    throw Error(Errc::invalid_input, "temperature must be in [0, 2]");
  }
  if (!(config.top_p > 0.0) || config.top_p > 1.0) {
    throw Error(Errc::invalid_input, "top_p must be in (0, 1]");
  }
  if (config.max_new_tokens < 1) {
    throw Error(Errc::invalid_input, "max_new_tokens must be >= 1");
  }
}

GenerationResult generate(const EndpointProfile& endpoint, const prompt::PromptRecord& prompt,
                          const DecodingConfig& config, const RetryPolicy& retry) {
  validate(config);
  if (retry.max_attempts < 1) throw Error(Errc::invalid_input, "max_attempts must be >= 1");
  const auto url = parse_base_url(endpoint.base_url);

  nlohmann::json payload = {
      {"model", endpoint.model_id},
      {"messages",
       {{{"role", "system"}, {"content", prompt.system_message}},
        {{"role", "user"}, {"content", prompt.user_prompt}}}},
      {"temperature", config.temperature},
      {"top_p", config.top_p},
      {"max_tokens", config.max_new_tokens},
  };
  const auto body = payload.dump();

  AttemptOutcome last;
  for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
    last = run_attempt(endpoint, url, body, retry, prompt);
    if (last.success) {
      last.result.attempts = attempt;
      return std::move(last.result);
    }
    if (!last.retryable || attempt == retry.max_attempts) break;
    if (!retry.backoff_ms.empty()) {
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(attempt) - 1,
                                             retry.backoff_ms.size() - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(retry.backoff_ms[idx]));
    }
  }
  throw Error(last.code, endpoint.model_id + ": " + last.detail);
}

std::vector<BatchItem> generate_batch(const EndpointProfile& endpoint,
                                      const std::vector<prompt::PromptRecord>& prompts,
                                      const DecodingConfig& config, int max_in_flight,
                                      const RetryPolicy& retry) {
  if (max_in_flight < 1) throw Error(Errc::invalid_input, "max_in_flight must be >= 1");
  std::vector<BatchItem> items(prompts.size());
  if (prompts.empty()) return items;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const auto i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      try {
        items[i].result = generate(endpoint, prompts[i], config, retry);
      } catch (const Error& e) {
        items[i].error_code = errc_name(e.code());
        items[i].error_message = e.what();
      } catch (const std::exception& e) {
        items[i].error_code = errc_name(Errc::transport_error);
        items[i].error_message = e.what();
      }
    }
  };

  const auto thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), prompts.size());
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  return items;
}

std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>(fable::text::split_tokens(text).size());
}

}  // namespace fable::gateway
