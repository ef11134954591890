#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fable/catalog.hpp"
#include "fable/config.hpp"

namespace fable::pipeline {

struct EvaluateRequest {
  std::string model_id;
  std::filesystem::path corpus;
};

/// sample -> render -> generate -> write, chunk by chunk. A rerun over an
/// existing output directory skips records whose hashes are already on disk
/// and continues from the next chunk. Prints the per-1000 cost at the end.
int cmd_generate(const PipelineConfig& config, std::ostream& out);

/// Computes the diversity metrics for each corpus and, when a judge is
/// configured, the critic aggregate. Writes diversity.csv, critic.csv, and
/// the combined seven-axis metrics.csv under <output_dir>/evaluation.
int cmd_evaluate(const PipelineConfig& config, const std::vector<EvaluateRequest>& requests,
                 std::ostream& out);

/// Ranks a seven-axis metrics table into a leaderboard. Empty paths fall
/// back to <output_dir>/evaluation/metrics.csv and <output_dir>/leaderboard.csv.
int cmd_rank(const PipelineConfig& config, const std::filesystem::path& table_path,
             const std::filesystem::path& out_path, std::ostream& out);

/// Corpus statistics (length moments, slot balance), cost totals, and any
/// metric/leaderboard tables already produced.
int cmd_report(const PipelineConfig& config, std::ostream& out);

/// Recovers the six slot values from a rendered prompt by matching catalog
/// entries against the template lines. nullopt when any line fails to match.
std::optional<std::array<std::string, prompt::kSlotCount>> extract_slots(
    const std::string& user_prompt, const prompt::SlotCatalog& catalog);

}  // namespace fable::pipeline
