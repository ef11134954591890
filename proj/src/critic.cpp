#include "fable/critic.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include <nlohmann/json.hpp>

#include "fable/error.hpp"

namespace fable::critic {
namespace {

constexpr const char* kRubricHeader =
    "You are a meticulous literary critic. Evaluate the fable below.\n"
    "\n"
    "Rate each of the following axes with a score from 1 to 10:\n"
    "- Grammar & Style: linguistic correctness and syntactic fluency.\n"
    "- Creativity: narrative originality and inventiveness.\n"
    "- Moral Clarity: explicitness and relevance of the ethical lesson.\n"
    "- Prompt Adherence: fidelity to the template’s structural and stylistic "
    "constraints.\n"
    "\n"
    "Classify the intended audience into one age group:\n"
    "- A: 3 years or under\n"
    "- B: 4-7 years\n"
    "- C: 8-11 years\n"
    "- D: 12-15 years\n"
    "- E: 16 years or above\n";

constexpr const char* kRubricFooter =
    "Answer with a single JSON object and nothing else, using exactly these keys:\n"
    "{\"grammar\": <number>, \"creativity\": <number>, \"moral_clarity\": <number>, "
    "\"adherence\": <number>, \"age_group\": \"<letter>\"}\n";

std::optional<nlohmann::json> extract_object(std::string_view reply) {
  for (auto start = reply.find('{'); start != std::string_view::npos;
       start = reply.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (auto i = start; i < reply.size(); ++i) {
      const char ch = reply[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (ch == '\\') {
          escaped = true;
        } else if (ch == '"') {
          in_string = false;
        }
        continue;
      }
      if (ch == '"') {
        in_string = true;
      } else if (ch == '{') {
        depth += 1;
      } else if (ch == '}') {
        depth -= 1;
        if (depth == 0) {
          auto parsed = nlohmann::json::parse(reply.substr(start, i - start + 1), nullptr, false);
          if (!parsed.is_discarded() && parsed.is_object()) return parsed;
          break;
        }
      }
    }
  }
  return std::nullopt;
}

double axis_score(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::unparseable_reply, std::string("reply lacks \"") + key + "\"");
  }
  double value;
  if (it->is_number()) {
    value = it->get<double>();
  } else if (it->is_string()) {
    try {
      value = std::stod(it->get<std::string>());
    } catch (...) {
      throw Error(Errc::unparseable_reply, std::string("\"") + key + "\" is not numeric");
    }
  } else {
    throw Error(Errc::unparseable_reply, std::string("\"") + key + "\" is not numeric");
  }
  return std::clamp(value, 1.0, 10.0);
}

prompt::AgeGroup age_from_reply(const nlohmann::json& obj) {
  auto it = obj.find("age_group");
  if (it == obj.end() || !it->is_string()) {
    throw Error(Errc::unparseable_reply, "reply lacks a string \"age_group\"");
  }
  for (char ch : it->get<std::string>()) {
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper >= 'A' && upper <= 'E') return static_cast<prompt::AgeGroup>(upper);
  }
  throw Error(Errc::unparseable_reply, "age_group holds no letter A-E");
}

}  // namespace

std::string build_rubric_prompt(std::string_view fable, std::string_view original_prompt) {
  if (fable.empty()) throw Error(Errc::invalid_input, "fable text is empty");
  std::string request = kRubricHeader;
  request += "\nThe fable was generated from this prompt:\n---\n";
  request += original_prompt;
  request += "\n---\n\nThe fable:\n---\n";
  request += fable;
  request += "\n---\n\n";
  request += kRubricFooter;
  return request;
}

CriticScores parse_scores(std::string_view reply) {
  auto obj = extract_object(reply);
  if (!obj) throw Error(Errc::unparseable_reply, "no JSON object found in reply");
  CriticScores scores;
  scores.grammar = axis_score(*obj, "grammar");
  scores.creativity = axis_score(*obj, "creativity");
  scores.moral_clarity = axis_score(*obj, "moral_clarity");
  scores.adherence = axis_score(*obj, "adherence");
  scores.age_group = age_from_reply(*obj);
  scores.raw_reply = std::string(reply);
  return scores;
}

std::string serialize_scores(const CriticScores& scores) {
  nlohmann::json obj = {
      {"grammar", scores.grammar},
      {"creativity", scores.creativity},
      {"moral_clarity", scores.moral_clarity},
      {"adherence", scores.adherence},
      {"age_group", std::string(1, static_cast<char>(scores.age_group))},
  };
  return obj.dump();
}

ModelAggregate aggregate_scores(const std::string& model_id,
                                const std::vector<CriticScores>& scores,
                                std::int64_t failed_count) {
  ModelAggregate agg;
  agg.model_id = model_id;
  agg.failed_count = failed_count;
  agg.scored_count = static_cast<std::int64_t>(scores.size());
  if (scores.empty()) return agg;

  std::map<char, std::int64_t> bracket_counts;
  for (const auto& s : scores) {
    agg.mean_grammar += s.grammar;
    agg.mean_creativity += s.creativity;
    agg.mean_moral += s.moral_clarity;
    agg.mean_adherence += s.adherence;
    bracket_counts[static_cast<char>(s.age_group)] += 1;
  }
  const auto n = static_cast<double>(scores.size());
  agg.mean_grammar /= n;
  agg.mean_creativity /= n;
  agg.mean_moral /= n;
  agg.mean_adherence /= n;
  agg.mean_overall =
      (agg.mean_grammar + agg.mean_creativity + agg.mean_moral + agg.mean_adherence) / 4.0;
  for (const auto& [bracket, count] : bracket_counts) {
    agg.age_histogram[bracket] = 100.0 * static_cast<double>(count) / n;
  }
  return agg;
}

ModelAggregate evaluate_model(const std::string& model_id, const std::vector<JudgedFable>& fables,
                              const gateway::EndpointProfile& judge, int max_in_flight,
                              const gateway::RetryPolicy& retry) {
  if (fables.empty()) throw Error(Errc::invalid_input, "no fables to evaluate");

  gateway::DecodingConfig judge_decoding;
  judge_decoding.temperature = 0.0;
  judge_decoding.top_p = 1.0;
  judge_decoding.max_new_tokens = 512;

  std::vector<prompt::PromptRecord> requests(fables.size());
  for (std::size_t i = 0; i < fables.size(); ++i) {
    requests[i].system_message = "You are a careful and consistent evaluator of children's stories.";
    requests[i].user_prompt = build_rubric_prompt(fables[i].fable, fables[i].prompt);
  }

  auto items = gateway::generate_batch(judge, requests, judge_decoding, max_in_flight, retry);

  std::vector<CriticScores> scores;
  scores.reserve(fables.size());
  std::int64_t failed = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].ok()) {
      failed += 1;
      continue;
    }
    try {
      scores.push_back(parse_scores(items[i].result->text));
      continue;
    } catch (const Error&) {
    }
    // One re-ask, then the fable counts as a failed evaluation.
    try {
      auto retried = gateway::generate(judge, requests[i], judge_decoding, retry);
      scores.push_back(parse_scores(retried.text));
    } catch (const std::exception&) {
      failed += 1;
    }
  }

  if (scores.empty()) {
    throw Error(Errc::judge_unavailable,
                "judge produced no parseable scores for " + model_id + " (" +
                    std::to_string(failed) + " failures)");
  }
  return aggregate_scores(model_id, scores, failed);
}

}  // namespace fable::critic
