#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fable/gateway.hpp"
#include "fable/metrics.hpp"
#include "fable/ranking.hpp"
#include "fable/sampler.hpp"
#include "fable/templates.hpp"

namespace fable {

/// One structured config document drives every subcommand. Secrets stay in
/// the environment via the endpoints' auth_token_env_var indirection.
struct PipelineConfig {
  std::filesystem::path catalog_path;
  std::filesystem::path output_dir = "out";
  std::int64_t chunk_size = 100000;
  int max_in_flight = 4;
  prompt::AgeGroup age_group = prompt::AgeGroup::B;
  prompt::SamplePlan plan;
  gateway::DecodingConfig decoding;
  gateway::RetryPolicy retry;
  std::vector<gateway::EndpointProfile> generators;
  std::optional<gateway::EndpointProfile> judge;
  metrics::MetricOptions metric_options;
  ranking::WeightProfile weights;
  std::string pipeline_version;
};

/// Parses and validates the JSON config: the catalog path must exist, at
/// least one generator endpoint must be declared, and every nested section
/// passes its own validation.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace fable
