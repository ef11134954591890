#include "fable/record.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "fable/error.hpp"
#include "fable/sha256.hpp"

namespace fable::corpus {
namespace {

// Serialization is hand-rolled: building a DOM per record is the difference
// between seconds and minutes at millions of rows.
void append_escaped(std::string& out, std::string_view value) {
  out.push_back('"');
  for (unsigned char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void append_field(std::string& out, std::string_view key, std::string_view value) {
  append_escaped(out, key);
  out.push_back(':');
  append_escaped(out, value);
}

void append_field(std::string& out, std::string_view key, std::int64_t value) {
  append_escaped(out, key);
  out.push_back(':');
  std::array<char, 24> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), end);
}

void append_field(std::string& out, std::string_view key, double value) {
  append_escaped(out, key);
  out.push_back(':');
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), end);
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::schema_violation, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

std::string get_string(const nlohmann::json& obj, const char* key) {
  const auto& value = require(obj, key);
  if (!value.is_string()) {
    throw Error(Errc::schema_violation, std::string("field \"") + key + "\" must be a string");
  }
  return value.get<std::string>();
}

std::int64_t get_int(const nlohmann::json& obj, const char* key) {
  const auto& value = require(obj, key);
  if (!value.is_number_integer()) {
    throw Error(Errc::schema_violation, std::string("field \"") + key + "\" must be an integer");
  }
  return value.get<std::int64_t>();
}

double get_number(const nlohmann::json& obj, const char* key) {
  const auto& value = require(obj, key);
  if (!value.is_number()) {
    throw Error(Errc::schema_violation, std::string("field \"") + key + "\" must be a number");
  }
  return value.get<double>();
}

constexpr std::array<const char*, 16> kFieldNames = {
    "language",         "prompt",         "fable",
    "hash",             "llm_name",       "llm_input_tokens",
    "llm_output_tokens", "llm_inference_time", "host_provider",
    "host_dc_provider", "host_dc_location", "host_gpu",
    "host_gpu_vram",    "host_cost_per_hour", "generation_datetime",
    "pipeline_version"};

}  // namespace

void validate_record(const FableRecord& record) {
  if (record.hash != sha256_hex(record.prompt)) {
    throw Error(Errc::schema_violation, "hash does not match SHA-256 of prompt");
  }
  if (!(record.llm_inference_time > 0.0)) {
    throw Error(Errc::schema_violation, "llm_inference_time must be positive");
  }
  if (record.llm_input_tokens < 0 || record.llm_output_tokens < 0) {
    throw Error(Errc::schema_violation, "token counts must be non-negative");
  }
}

std::string to_jsonl(const FableRecord& r) {
  std::string out;
  out.reserve(r.prompt.size() + r.fable.size() + 512);
  out.push_back('{');
  append_field(out, "language", r.language);
  out.push_back(',');
  append_field(out, "prompt", r.prompt);
  out.push_back(',');
  append_field(out, "fable", r.fable);
  out.push_back(',');
  append_field(out, "hash", r.hash);
  out.push_back(',');
  append_field(out, "llm_name", r.llm_name);
  out.push_back(',');
  append_field(out, "llm_input_tokens", r.llm_input_tokens);
  out.push_back(',');
  append_field(out, "llm_output_tokens", r.llm_output_tokens);
  out.push_back(',');
  append_field(out, "llm_inference_time", r.llm_inference_time);
  out.push_back(',');
  append_field(out, "host_provider", r.host_provider);
  out.push_back(',');
  append_field(out, "host_dc_provider", r.host_dc_provider);
  out.push_back(',');
  append_field(out, "host_dc_location", r.host_dc_location);
  out.push_back(',');
  append_field(out, "host_gpu", r.host_gpu);
  out.push_back(',');
  append_field(out, "host_gpu_vram", r.host_gpu_vram);
  out.push_back(',');
  append_field(out, "host_cost_per_hour", r.host_cost_per_hour);
  out.push_back(',');
  append_field(out, "generation_datetime", r.generation_datetime);
  out.push_back(',');
  append_field(out, "pipeline_version", r.pipeline_version);
  out.push_back('}');
  return out;
}

FableRecord parse_record(std::string_view line) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(Errc::schema_violation, "line is not a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : kFieldNames) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) throw Error(Errc::schema_violation, "unknown field \"" + key + "\"");
  }
  FableRecord r;
  r.language = get_string(obj, "language");
  r.prompt = get_string(obj, "prompt");
  r.fable = get_string(obj, "fable");
  r.hash = get_string(obj, "hash");
  r.llm_name = get_string(obj, "llm_name");
  r.llm_input_tokens = get_int(obj, "llm_input_tokens");
  r.llm_output_tokens = get_int(obj, "llm_output_tokens");
  r.llm_inference_time = get_number(obj, "llm_inference_time");
  r.host_provider = get_string(obj, "host_provider");
  r.host_dc_provider = get_string(obj, "host_dc_provider");
  r.host_dc_location = get_string(obj, "host_dc_location");
  r.host_gpu = get_string(obj, "host_gpu");
  r.host_gpu_vram = get_string(obj, "host_gpu_vram");
  r.host_cost_per_hour = get_number(obj, "host_cost_per_hour");
  r.generation_datetime = get_string(obj, "generation_datetime");
  r.pipeline_version = get_string(obj, "pipeline_version");
  return r;
}

}  // namespace fable::corpus
