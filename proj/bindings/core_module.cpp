// Python bindings for the core operations: catalogs, sampling, prompt
// rendering, text metrics, cost accounting, judge parsing, and ranking.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fable/catalog.hpp"
#include "fable/cost.hpp"
#include "fable/critic.hpp"
#include "fable/error.hpp"
#include "fable/gateway.hpp"
#include "fable/metrics.hpp"
#include "fable/ranking.hpp"
#include "fable/record.hpp"
#include "fable/sampler.hpp"
#include "fable/sha256.hpp"
#include "fable/templates.hpp"
#include "fable/text.hpp"
#include "fable/version.hpp"

namespace py = pybind11;
using namespace fable;
using namespace fable::metrics;

namespace {

std::vector<TokenizedDoc> tokenize_all(const std::vector<std::string>& texts) {
  std::vector<TokenizedDoc> docs;
  docs.reserve(texts.size());
  for (const auto& text : texts) docs.push_back(tokenize(text));
  return docs;
}

prompt::SlotTuple tuple_from(const std::array<std::int32_t, prompt::kSlotCount>& idx) {
  prompt::SlotTuple tuple;
  tuple.idx = idx;
  return tuple;
}

ranking::AxisVector axes_from(const std::array<double, 7>& values) {
  ranking::AxisVector v;
  v.grammar = values[0];
  v.creativity = values[1];
  v.moral_clarity = values[2];
  v.adherence = values[3];
  v.self_bleu = values[4];
  v.distinct_1 = values[5];
  v.flesch = values[6];
  return v;
}

std::array<double, 7> axes_to(const ranking::AxisVector& v) {
  return {v.grammar, v.creativity, v.moral_clarity, v.adherence,
          v.self_bleu, v.distinct_1, v.flesch};
}

ranking::WeightProfile weights_from(const std::optional<py::dict>& overrides) {
  ranking::WeightProfile weights;
  if (overrides) {
    for (const auto& item : *overrides) {
      const auto key = item.first.cast<std::string>();
      const auto value = item.second.cast<double>();
      if (key == "adherence") weights.adherence = value;
      else if (key == "grammar") weights.grammar = value;
      else if (key == "moral_clarity") weights.moral_clarity = value;
      else if (key == "creativity") weights.creativity = value;
      else if (key == "self_bleu") weights.self_bleu = value;
      else if (key == "distinct_1") weights.distinct_1 = value;
      else if (key == "flesch") weights.flesch = value;
      else throw Error(Errc::invalid_input, "unknown weight \"" + key + "\"");
    }
  }
  ranking::validate(weights);
  return weights;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "core operations of the fable generation pipeline";
  m.attr("__version__") = kPipelineVersion;

  py::register_exception<Error>(m, "FableError");

  py::class_<prompt::SlotCatalog>(m, "Catalog")
      .def_readonly("characters", &prompt::SlotCatalog::characters)
      .def_readonly("traits", &prompt::SlotCatalog::traits)
      .def_readonly("settings", &prompt::SlotCatalog::settings)
      .def_readonly("conflicts", &prompt::SlotCatalog::conflicts)
      .def_readonly("resolutions", &prompt::SlotCatalog::resolutions)
      .def_readonly("morals", &prompt::SlotCatalog::morals)
      .def("sizes", &prompt::SlotCatalog::sizes)
      .def("__repr__", [](const prompt::SlotCatalog& catalog) {
        return "Catalog(space_size=" + prompt::to_string(prompt::space_size(catalog)) + ")";
      });

  m.def("load_catalog", &prompt::load_catalog, py::arg("path"),
        "Load and validate a slot catalog from a JSON file.");
  m.def(
      "space_size",
      [](const prompt::SlotCatalog& catalog) {
        return prompt::to_string(prompt::space_size(catalog));
      },
      py::arg("catalog"),
      "Total number of slot combinations, as a decimal string.");

  m.def(
      "sample_prompts",
      [](const prompt::SlotCatalog& catalog, std::int64_t target_count, std::uint64_t seed,
         double pair_cap_slack, double balance_tolerance) {
        prompt::SamplePlan plan;
        plan.target_count = target_count;
        plan.seed = seed;
        plan.pair_cap_slack = pair_cap_slack;
        plan.balance_tolerance = balance_tolerance;
        std::vector<std::array<std::int32_t, prompt::kSlotCount>> out;
        for (const auto& tuple : prompt::sample_prompts(catalog, plan)) {
          out.push_back(tuple.idx);
        }
        return out;
      },
      py::arg("catalog"), py::arg("target_count"), py::arg("seed") = 0,
      py::arg("pair_cap_slack") = 2.0, py::arg("balance_tolerance") = 0.05,
      "Draw distinct slot tuples under the uniqueness, pair-cap, and balance "
      "safeguards. Returns one 6-list of indices per prompt.");

  m.def(
      "render_prompt",
      [](const prompt::SlotCatalog& catalog,
         const std::array<std::int32_t, prompt::kSlotCount>& indices, char age_group) {
        const auto age = prompt::age_group_from_letter(age_group);
        const auto record = prompt::render_prompt(catalog, tuple_from(indices), age);
        py::dict out;
        out["system"] = record.system_message;
        out["user"] = record.user_prompt;
        out["hash"] = record.hash;
        out["age_group"] = std::string(1, static_cast<char>(age));
        return out;
      },
      py::arg("catalog"), py::arg("indices"), py::arg("age_group") = 'B',
      "Render the chat messages for one slot tuple.");

  m.def("sha256_hex", [](const std::string& data) { return sha256_hex(data); },
        py::arg("data"));
  m.def("estimate_tokens", [](const std::string& text) { return gateway::estimate_tokens(text); },
        py::arg("text"), "Deterministic token-count estimate used for missing usage data.");

  m.def(
      "tokenize",
      [](const std::string& text) {
        const auto doc = tokenize(text);
        py::dict out;
        out["tokens"] = doc.tokens;
        out["word_count"] = doc.word_count;
        out["sentence_count"] = doc.sentence_count;
        out["syllable_count"] = doc.syllable_count;
        return out;
      },
      py::arg("text"));

  m.def(
      "distinct_n",
      [](const std::vector<std::string>& docs, int n) { return distinct_n(tokenize_all(docs), n); },
      py::arg("docs"), py::arg("n"),
      "Unique n-grams over total n-gram occurrences, pooled across documents.");
  m.def(
      "bleu",
      [](const std::string& candidate, const std::vector<std::string>& references, int max_n) {
        return bleu_doc(tokenize(candidate), tokenize_all(references), max_n);
      },
      py::arg("candidate"), py::arg("references"), py::arg("max_n") = 4);
  m.def(
      "self_bleu",
      [](const std::vector<std::string>& docs, int max_n, std::optional<std::int64_t> sample_size,
         std::uint64_t seed) { return self_bleu(tokenize_all(docs), max_n, sample_size, seed); },
      py::arg("docs"), py::arg("max_n") = 4, py::arg("sample_size") = std::nullopt,
      py::arg("seed") = 0,
      "Mean leave-one-out BLEU across the corpus; lower means more diverse.");
  m.def(
      "flesch_reading_ease",
      [](const std::vector<std::string>& docs) { return flesch_reading_ease(tokenize_all(docs)); },
      py::arg("docs"));

  m.def("compute_cost", &corpus::compute_cost, py::arg("rate_per_hour"),
        py::arg("duration_seconds"), "rate x seconds / 3600, rounded to the cent.");
  m.def("minute_billed_cost", &corpus::minute_billed_cost, py::arg("rate_per_hour"),
        py::arg("duration_seconds"));
  m.def("cost_per_thousand", &corpus::cost_per_thousand, py::arg("total_cost"),
        py::arg("record_count"));

  m.def("build_rubric_prompt", &critic::build_rubric_prompt, py::arg("fable"),
        py::arg("original_prompt"), "Judge request text for one fable.");
  m.def(
      "parse_scores",
      [](const std::string& reply) {
        const auto scores = critic::parse_scores(reply);
        py::dict out;
        out["grammar"] = scores.grammar;
        out["creativity"] = scores.creativity;
        out["moral_clarity"] = scores.moral_clarity;
        out["adherence"] = scores.adherence;
        out["age_group"] = std::string(1, static_cast<char>(scores.age_group));
        return out;
      },
      py::arg("reply"), "Extract the structured scores from a judge reply.");

  m.def("normalize_axis", &ranking::normalize_axis, py::arg("values"),
        py::arg("invert") = false, "Min-max normalization to [0, 1].");
  m.def(
      "rank_models",
      [](const std::vector<std::pair<std::string, std::array<double, 7>>>& models,
         const std::optional<py::dict>& weights) {
        std::vector<std::pair<std::string, ranking::AxisVector>> rows;
        rows.reserve(models.size());
        for (const auto& [id, values] : models) rows.emplace_back(id, axes_from(values));
        py::list out;
        for (const auto& card : ranking::rank_models(rows, weights_from(weights))) {
          py::dict entry;
          entry["model_id"] = card.model_id;
          entry["composite"] = card.composite;
          entry["raw"] = axes_to(card.raw);
          entry["normalized"] = axes_to(card.normalized);
          out.append(entry);
        }
        return out;
      },
      py::arg("models"), py::arg("weights") = std::nullopt,
      "Rank models by weighted normalized axes. Each model is (id, [grammar, "
      "creativity, moral_clarity, adherence, self_bleu, distinct_1, flesch]).");

  m.def(
      "record_to_jsonl",
      [](const py::dict& fields) {
        corpus::FableRecord record;
        record.language = fields["language"].cast<std::string>();
        record.prompt = fields["prompt"].cast<std::string>();
        record.fable = fields["fable"].cast<std::string>();
        record.hash = fields["hash"].cast<std::string>();
        record.llm_name = fields["llm_name"].cast<std::string>();
        record.llm_input_tokens = fields["llm_input_tokens"].cast<std::int64_t>();
        record.llm_output_tokens = fields["llm_output_tokens"].cast<std::int64_t>();
        record.llm_inference_time = fields["llm_inference_time"].cast<double>();
        record.host_provider = fields["host_provider"].cast<std::string>();
        record.host_dc_provider = fields["host_dc_provider"].cast<std::string>();
        record.host_dc_location = fields["host_dc_location"].cast<std::string>();
        record.host_gpu = fields["host_gpu"].cast<std::string>();
        record.host_gpu_vram = fields["host_gpu_vram"].cast<std::string>();
        record.host_cost_per_hour = fields["host_cost_per_hour"].cast<double>();
        record.generation_datetime = fields["generation_datetime"].cast<std::string>();
        record.pipeline_version = fields["pipeline_version"].cast<std::string>();
        return corpus::to_jsonl(record);
      },
      py::arg("fields"), "Serialize one dataset record to a JSON line.");
  m.def(
      "parse_record",
      [](const std::string& line) {
        const auto record = corpus::parse_record(line);
        py::dict out;
        out["language"] = record.language;
        out["prompt"] = record.prompt;
        out["fable"] = record.fable;
        out["hash"] = record.hash;
        out["llm_name"] = record.llm_name;
        out["llm_input_tokens"] = record.llm_input_tokens;
        out["llm_output_tokens"] = record.llm_output_tokens;
        out["llm_inference_time"] = record.llm_inference_time;
        out["host_provider"] = record.host_provider;
        out["host_dc_provider"] = record.host_dc_provider;
        out["host_dc_location"] = record.host_dc_location;
        out["host_gpu"] = record.host_gpu;
        out["host_gpu_vram"] = record.host_gpu_vram;
        out["host_cost_per_hour"] = record.host_cost_per_hour;
        out["generation_datetime"] = record.generation_datetime;
        out["pipeline_version"] = record.pipeline_version;
        return out;
      },
      py::arg("line"), "Parse one JSON line back into its fields. Strict.");
}
