#include "fable/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "fable/error.hpp"
#include "fable/version.hpp"

namespace fable {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw Error(Errc::invalid_input, "config: " + message);
}

void expect_keys(const json& obj, const char* section, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* name : known) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(std::string(section) + " holds unknown key \"" + key + "\"");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(std::string("key \"") + key + "\" has the wrong type");
  }
}

std::string require_string(const json& obj, const char* key, const char* section) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    fail(std::string(section) + " needs a non-empty string \"" + key + "\"");
  }
  return it->get<std::string>();
}

gateway::EndpointProfile parse_endpoint(const json& obj, const char* section) {
  if (!obj.is_object()) fail(std::string(section) + " must be an object");
  expect_keys(obj, section,
              {"base_url", "model_id", "auth_token_env_var", "host_provider", "host_dc_provider",
               "host_dc_location", "host_gpu", "host_gpu_vram", "host_cost_per_hour"});
  gateway::EndpointProfile endpoint;
  endpoint.base_url = require_string(obj, "base_url", section);
  if (endpoint.base_url.find("://") == std::string::npos) {
    fail(std::string(section) + ".base_url must be an absolute URL");
  }
  endpoint.model_id = require_string(obj, "model_id", section);
  endpoint.auth_token_env_var = get_or<std::string>(obj, "auth_token_env_var", "");
  endpoint.host_provider = get_or<std::string>(obj, "host_provider", "");
  endpoint.host_dc_provider = get_or<std::string>(obj, "host_dc_provider", "");
  endpoint.host_dc_location = get_or<std::string>(obj, "host_dc_location", "");
  endpoint.host_gpu = get_or<std::string>(obj, "host_gpu", "");
  endpoint.host_gpu_vram = get_or<std::string>(obj, "host_gpu_vram", "");
  endpoint.host_cost_per_hour = get_or<double>(obj, "host_cost_per_hour", 0.0);
  if (endpoint.host_cost_per_hour < 0.0) {
    fail(std::string(section) + ".host_cost_per_hour must be non-negative");
  }
  return endpoint;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read config " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::invalid_input, "config " + path.string() + " is not a JSON object");
  }
  expect_keys(doc, "config",
              {"catalog_path", "output_dir", "chunk_size", "max_in_flight", "age_group", "sample",
               "decoding", "retry", "generators", "judge", "metrics", "weights",
               "pipeline_version"});

  PipelineConfig config;
  config.catalog_path = require_string(doc, "catalog_path", "config");
  config.output_dir = get_or<std::string>(doc, "output_dir", "out");
  config.chunk_size = get_or<std::int64_t>(doc, "chunk_size", 100000);
  if (config.chunk_size < 1) fail("chunk_size must be >= 1");
  config.max_in_flight = get_or<int>(doc, "max_in_flight", 4);
  if (config.max_in_flight < 1) fail("max_in_flight must be >= 1");

  const auto age = get_or<std::string>(doc, "age_group", "B");
  if (age.size() != 1) fail("age_group must be a single letter A-E");
  config.age_group = prompt::age_group_from_letter(age[0]);

  if (auto it = doc.find("sample"); it != doc.end()) {
    expect_keys(*it, "sample", {"target_count", "seed", "pair_cap_slack", "balance_tolerance"});
    config.plan.target_count = get_or<std::int64_t>(*it, "target_count", 0);
    config.plan.seed = get_or<std::uint64_t>(*it, "seed", 0);
    config.plan.pair_cap_slack = get_or<double>(*it, "pair_cap_slack", 2.0);
    config.plan.balance_tolerance = get_or<double>(*it, "balance_tolerance", 0.05);
  }

  if (auto it = doc.find("decoding"); it != doc.end()) {
    expect_keys(*it, "decoding", {"temperature", "top_p", "max_new_tokens"});
    config.decoding.temperature = get_or<double>(*it, "temperature", 0.7);
    config.decoding.top_p = get_or<double>(*it, "top_p", 1.0);
    config.decoding.max_new_tokens = get_or<std::int64_t>(*it, "max_new_tokens", 1000);
  }
  gateway::validate(config.decoding);

  if (auto it = doc.find("retry"); it != doc.end()) {
    expect_keys(*it, "retry",
                {"max_attempts", "backoff_ms", "timeout_seconds", "estimate_missing_usage"});
    config.retry.max_attempts = get_or<int>(*it, "max_attempts", 3);
    config.retry.backoff_ms = get_or<std::vector<int>>(*it, "backoff_ms", {1000, 2000, 4000});
    config.retry.timeout_seconds = get_or<double>(*it, "timeout_seconds", 120.0);
    config.retry.estimate_missing_usage = get_or<bool>(*it, "estimate_missing_usage", false);
    if (config.retry.max_attempts < 1) fail("retry.max_attempts must be >= 1");
    if (config.retry.timeout_seconds <= 0.0) fail("retry.timeout_seconds must be positive");
  }

  auto generators = doc.find("generators");
  if (generators == doc.end() || !generators->is_array() || generators->empty()) {
    fail("at least one generator endpoint is required");
  }
  for (const auto& entry : *generators) {
    config.generators.push_back(parse_endpoint(entry, "generators[]"));
  }

  if (auto it = doc.find("judge"); it != doc.end() && !it->is_null()) {
    config.judge = parse_endpoint(*it, "judge");
  }

  if (auto it = doc.find("metrics"); it != doc.end()) {
    expect_keys(*it, "metrics", {"max_n", "sample_size", "seed"});
    config.metric_options.max_n = get_or<int>(*it, "max_n", 4);
    if (auto size = it->find("sample_size"); size != it->end() && !size->is_null()) {
      config.metric_options.sample_size = size->get<std::int64_t>();
    }
    config.metric_options.seed = get_or<std::uint64_t>(*it, "seed", 0);
    if (config.metric_options.max_n < 1) fail("metrics.max_n must be >= 1");
  }

  if (auto it = doc.find("weights"); it != doc.end()) {
    expect_keys(*it, "weights",
                {"adherence", "grammar", "moral_clarity", "creativity", "self_bleu", "distinct_1",
                 "flesch"});
    config.weights.adherence = get_or<double>(*it, "adherence", 0.35);
    config.weights.grammar = get_or<double>(*it, "grammar", 0.20);
    config.weights.moral_clarity = get_or<double>(*it, "moral_clarity", 0.20);
    config.weights.creativity = get_or<double>(*it, "creativity", 0.10);
    config.weights.self_bleu = get_or<double>(*it, "self_bleu", 0.05);
    config.weights.distinct_1 = get_or<double>(*it, "distinct_1", 0.05);
    config.weights.flesch = get_or<double>(*it, "flesch", 0.05);
  }
  ranking::validate(config.weights);

  config.pipeline_version = get_or<std::string>(doc, "pipeline_version", kPipelineVersion);

  // Relative paths are anchored at the config file so a run can be launched
  // from anywhere.
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (config.catalog_path.is_relative()) config.catalog_path = base / config.catalog_path;
  if (config.output_dir.is_relative()) config.output_dir = base / config.output_dir;

  if (!std::filesystem::exists(config.catalog_path)) {
    fail("catalog_path does not exist: " + config.catalog_path.string());
  }
  return config;
}

}  // namespace fable
