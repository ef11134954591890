#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fable::ranking {

/// Raw per-model scores on the seven ranked axes. Judge axes live on the
/// 1-10 scale, self_bleu and distinct_1 in [0,1], flesch unbounded.
struct AxisVector {
  double grammar = 0.0;
  double creativity = 0.0;
  double moral_clarity = 0.0;
  double adherence = 0.0;
  double self_bleu = 0.0;
  double distinct_1 = 0.0;
  double flesch = 0.0;
};

struct WeightProfile {
  double adherence = 0.35;
  double grammar = 0.20;
  double moral_clarity = 0.20;
  double creativity = 0.10;
  double self_bleu = 0.05;
  double distinct_1 = 0.05;
  double flesch = 0.05;
};

/// Weights must be non-negative and sum to 1 within 1e-9.
void validate(const WeightProfile& weights);

struct ModelScorecard {
  std::string model_id;
  AxisVector raw;
  AxisVector normalized;
  double composite = 0.0;
};

/// Min-max normalization to [0,1]; invert flips the scale for
/// lower-is-better axes. A degenerate column (max = min) maps everything
/// to 0.5. Throws TooFewValues below 2 entries.
std::vector<double> normalize_axis(const std::vector<double>& values, bool invert);

/// Weighted sum of an already-normalized vector.
double composite_score(const AxisVector& normalized, const WeightProfile& weights);

/// Normalizes every axis across models (self_bleu inverted), computes
/// composites, and sorts descending. Ties break by raw adherence, then raw
/// moral clarity, then model_id.
std::vector<ModelScorecard> rank_models(
    const std::vector<std::pair<std::string, AxisVector>>& models, const WeightProfile& weights);

/// CSV shuttle format: model_id plus the seven axis columns.
std::vector<std::pair<std::string, AxisVector>> load_metrics_table(
    const std::filesystem::path& path);
void save_metrics_table(const std::filesystem::path& path,
                        const std::vector<std::pair<std::string, AxisVector>>& models);
void save_leaderboard(const std::filesystem::path& path,
                      const std::vector<ModelScorecard>& board);

}  // namespace fable::ranking
