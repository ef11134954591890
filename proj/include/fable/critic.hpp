#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fable/gateway.hpp"
#include "fable/templates.hpp"

namespace fable::critic {

struct CriticScores {
  double grammar = 0.0;
  double creativity = 0.0;
  double moral_clarity = 0.0;
  double adherence = 0.0;
  prompt::AgeGroup age_group = prompt::AgeGroup::B;
  std::string raw_reply;
};

struct JudgedFable {
  std::string fable;
  std::string prompt;
};

struct ModelAggregate {
  std::string model_id;
  double mean_grammar = 0.0;
  double mean_creativity = 0.0;
  double mean_moral = 0.0;
  double mean_adherence = 0.0;
  double mean_overall = 0.0;
  std::map<char, double> age_histogram;
  std::int64_t scored_count = 0;
  std::int64_t failed_count = 0;
};

/// Request text for the judge: axis definitions, age-group definitions, the
/// originating prompt, the fable, and the answer-shape instruction.
std::string build_rubric_prompt(std::string_view fable, std::string_view original_prompt);

/// Pulls the structured score object out of a judge reply, tolerating prose
/// and code fences around it. Numeric scores clamp into [1,10]; the age
/// letter is case-normalized. Throws UnparseableReply.
CriticScores parse_scores(std::string_view reply);

/// Canonical JSON for a score set; parse_scores(serialize_scores(s))
/// round-trips everything but raw_reply.
std::string serialize_scores(const CriticScores& scores);

/// Means plus age histogram over parsed scores. Percentages sum to 100.
ModelAggregate aggregate_scores(const std::string& model_id,
                                const std::vector<CriticScores>& scores,
                                std::int64_t failed_count);

/// Scores every fable via the judge endpoint (temperature 0, one re-ask on
/// an unparseable reply) and aggregates. Throws JudgeUnavailable when
/// nothing could be scored.
ModelAggregate evaluate_model(const std::string& model_id, const std::vector<JudgedFable>& fables,
                              const gateway::EndpointProfile& judge, int max_in_flight = 4,
                              const gateway::RetryPolicy& retry = {});

}  // namespace fable::critic
