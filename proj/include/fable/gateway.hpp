#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fable/templates.hpp"

namespace fable::gateway {

struct DecodingConfig {
  double temperature = 0.7;
  double top_p = 1.0;
  std::int64_t max_new_tokens = 1000;
};

void validate(const DecodingConfig& config);

struct EndpointProfile {
  std::string base_url;
  std::string model_id;
  std::string auth_token_env_var;
  std::string host_provider;
  std::string host_dc_provider;
  std::string host_dc_location;
  std::string host_gpu;
  std::string host_gpu_vram;
  double host_cost_per_hour = 0.0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<int> backoff_ms = {1000, 2000, 4000};
  double timeout_seconds = 120.0;
  /// When an endpoint omits usage counts, estimate them from the text
  /// instead of failing; results are flagged usage_estimated.
  bool estimate_missing_usage = false;
};

struct GenerationResult {
  std::string text;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  double inference_time = 0.0;
  int attempts = 1;
  std::string finished_at;
  bool usage_estimated = false;
};

/// POSTs the system and user messages to {base_url}/v1/chat/completions
/// with the decoding fields, retrying transport failures and 429/5xx with
/// capped exponential backoff. inference_time spans the successful attempt.
GenerationResult generate(const EndpointProfile& endpoint, const prompt::PromptRecord& prompt,
                          const DecodingConfig& config, const RetryPolicy& retry = {});

struct BatchItem {
  std::optional<GenerationResult> result;
  std::string error_code;
  std::string error_message;

  bool ok() const { return result.has_value(); }
};

/// Runs generate over the prompts with at most max_in_flight requests
/// outstanding. Results come back in prompt order; per-item failures are
/// embedded, never thrown.
std::vector<BatchItem> generate_batch(const EndpointProfile& endpoint,
                                      const std::vector<prompt::PromptRecord>& prompts,
                                      const DecodingConfig& config, int max_in_flight,
                                      const RetryPolicy& retry = {});

/// Whitespace-and-punctuation token count, the fallback when an endpoint
/// reports no usage.
std::int64_t estimate_tokens(std::string_view text);

}  // namespace fable::gateway
