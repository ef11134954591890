#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fable::corpus {

/// One dataset row: the fable itself plus the generation metadata. Field
/// names are bit-exact in the serialized output.
struct FableRecord {
  std::string language = "en";
  std::string prompt;
  std::string fable;
  std::string hash;
  std::string llm_name;
  std::int64_t llm_input_tokens = 0;
  std::int64_t llm_output_tokens = 0;
  double llm_inference_time = 0.0;
  std::string host_provider;
  std::string host_dc_provider;
  std::string host_dc_location;
  std::string host_gpu;
  std::string host_gpu_vram;
  double host_cost_per_hour = 0.0;
  std::string generation_datetime;
  std::string pipeline_version;

  bool operator==(const FableRecord&) const = default;
};

/// Throws SchemaViolation unless the hash matches the prompt, the inference
/// time is positive, and token counts are non-negative.
void validate_record(const FableRecord& record);

/// Serializes one record as a single JSON line (no trailing newline), keys
/// in declaration order, all control characters escaped.
std::string to_jsonl(const FableRecord& record);

/// Parses one JSON line back into a record. Strict: every field required,
/// unknown keys rejected. Throws SchemaViolation.
FableRecord parse_record(std::string_view line);

}  // namespace fable::corpus
