#include "fable/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fable/cost.hpp"
#include "fable/critic.hpp"
#include "fable/error.hpp"
#include "fable/gateway.hpp"
#include "fable/metrics.hpp"
#include "fable/ranking.hpp"
#include "fable/sampler.hpp"
#include "fable/writer.hpp"

namespace fable::pipeline {
namespace {

namespace fs = std::filesystem;

std::string money(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string fixed(double value, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

struct LoadedCorpus {
  std::vector<critic::JudgedFable> fables;
  std::vector<metrics::TokenizedDoc> docs;
};

// JSONL corpora carry the originating prompt alongside the fable; raw text
// directories judge with an empty prompt.
LoadedCorpus load_eval_corpus(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(Errc::io_error, "corpus path does not exist: " + path.string());
  }
  LoadedCorpus corpus;
  if (fs::is_directory(path)) {
    corpus.docs = metrics::load_corpus(path);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      corpus.fables.push_back({std::move(text), ""});
    }
    return corpus;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    line_no += 1;
    if (line.empty()) continue;
    nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("fable") ||
        !parsed["fable"].is_string()) {
      throw Error(Errc::schema_violation, path.string() + " line " + std::to_string(line_no) +
                                              ": expected an object with a string \"fable\"");
    }
    critic::JudgedFable item;
    item.fable = parsed["fable"].get<std::string>();
    if (parsed.contains("prompt") && parsed["prompt"].is_string()) {
      item.prompt = parsed["prompt"].get<std::string>();
    }
    corpus.docs.push_back(metrics::tokenize(item.fable));
    corpus.fables.push_back(std::move(item));
  }
  return corpus;
}

struct DiversityRow {
  std::string model_id;
  std::optional<double> self_bleu;
  double distinct_1 = 0.0;
  double flesch = 0.0;
  std::int64_t doc_count = 0;
  bool sampled = false;
};

std::vector<corpus::FableRecord> read_manifest_records(const fs::path& dir,
                                                       const corpus::Manifest& manifest) {
  std::vector<corpus::FableRecord> records;
  records.reserve(static_cast<std::size_t>(manifest.total_records()));
  for (const auto& file : manifest.files) {
    const auto path = dir / file.name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "manifest names missing chunk " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      records.push_back(corpus::parse_record(line));
    }
  }
  return records;
}

}  // namespace

std::optional<std::array<std::string, prompt::kSlotCount>> extract_slots(
    const std::string& user_prompt, const prompt::SlotCatalog& catalog) {
  auto line_value = [&](const std::string& prefix,
                        const std::string& suffix) -> std::optional<std::string> {
    auto start = user_prompt.find(prefix);
    if (start == std::string::npos) return std::nullopt;
    start += prefix.size();
    auto end = user_prompt.find('\n', start);
    if (end == std::string::npos) end = user_prompt.size();
    std::string value = user_prompt.substr(start, end - start);
    if (!suffix.empty()) {
      if (value.size() < suffix.size() ||
          value.compare(value.size() - suffix.size(), suffix.size(), suffix) != 0) {
        return std::nullopt;
      }
      value.resize(value.size() - suffix.size());
    }
    return value;
  };

  std::array<std::string, prompt::kSlotCount> values;
  const auto character_line = line_value("- Main Character: a ", "");
  if (!character_line) return std::nullopt;
  bool matched = false;
  for (const auto& trait : catalog.traits) {
    if (character_line->size() > trait.size() + 1 &&
        character_line->compare(0, trait.size(), trait) == 0 &&
        (*character_line)[trait.size()] == ' ') {
      const auto character = character_line->substr(trait.size() + 1);
      if (std::find(catalog.characters.begin(), catalog.characters.end(), character) !=
          catalog.characters.end()) {
        values[0] = character;
        values[1] = trait;
        matched = true;
        break;
      }
    }
  }
  if (!matched) return std::nullopt;

  const auto setting = line_value("- Setting: a ", " where our story unfolds");
  const auto conflict = line_value("- Challenge: ", "");
  const auto resolution = line_value("- Outcome: ", "");
  const auto moral = line_value("- Teaching: ", "");
  if (!setting || !conflict || !resolution || !moral) return std::nullopt;
  values[2] = *setting;
  values[3] = *conflict;
  values[4] = *resolution;
  values[5] = *moral;
  return values;
}

int cmd_generate(const PipelineConfig& config, std::ostream& out) {
  const auto catalog = prompt::load_catalog(config.catalog_path);
  const auto tuples = prompt::sample_prompts(catalog, config.plan);
  std::vector<prompt::PromptRecord> prompts;
  prompts.reserve(tuples.size());
  for (const auto& tuple : tuples) {
    prompts.push_back(prompt::render_prompt(catalog, tuple, config.age_group));
  }

  const auto& endpoint = config.generators.front();
  corpus::ChunkedWriter writer(config.output_dir, config.chunk_size, config.pipeline_version);

  std::vector<const prompt::PromptRecord*> pending;
  pending.reserve(prompts.size());
  if (writer.manifest().total_records() > 0) {
    const auto done = corpus::collect_hashes(config.output_dir, writer.manifest());
    for (const auto& p : prompts) {
      if (!done.contains(p.hash)) pending.push_back(&p);
    }
    out << "resuming: " << (prompts.size() - pending.size()) << " of " << prompts.size()
        << " records already on disk\n";
  } else {
    for (const auto& p : prompts) pending.push_back(&p);
  }

  double run_seconds = 0.0;
  std::int64_t generated = 0;
  for (std::size_t offset = 0; offset < pending.size();
       offset += static_cast<std::size_t>(config.chunk_size)) {
    const auto count =
        std::min(static_cast<std::size_t>(config.chunk_size), pending.size() - offset);
    std::vector<prompt::PromptRecord> batch;
    batch.reserve(count);
    for (std::size_t i = 0; i < count; ++i) batch.push_back(*pending[offset + i]);

    const auto items =
        gateway::generate_batch(endpoint, batch, config.decoding, config.max_in_flight,
                                config.retry);
    std::int64_t failures = 0;
    std::string first_error;
    for (const auto& item : items) {
      if (!item.ok() && failures++ == 0) {
        first_error = item.error_message;
      }
    }
    if (failures > 0) {
      throw Error(Errc::endpoint_error,
                  std::to_string(failures) + " of " + std::to_string(count) +
                      " generations failed in the current chunk (completed chunks are kept; "
                      "rerun to resume); first failure: " +
                      first_error);
    }

    std::vector<corpus::FableRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& result = *items[i].result;
      corpus::FableRecord record;
      record.prompt = batch[i].user_prompt;
      record.fable = result.text;
      record.hash = batch[i].hash;
      record.llm_name = endpoint.model_id;
      record.llm_input_tokens = result.input_tokens;
      record.llm_output_tokens = result.output_tokens;
      record.llm_inference_time = result.inference_time;
      record.host_provider = endpoint.host_provider;
      record.host_dc_provider = endpoint.host_dc_provider;
      record.host_dc_location = endpoint.host_dc_location;
      record.host_gpu = endpoint.host_gpu;
      record.host_gpu_vram = endpoint.host_gpu_vram;
      record.host_cost_per_hour = endpoint.host_cost_per_hour;
      record.generation_datetime = result.finished_at;
      record.pipeline_version = config.pipeline_version;
      run_seconds += result.inference_time;
      records.push_back(std::move(record));
    }
    writer.append_chunk(records);
    generated += static_cast<std::int64_t>(count);
    out << "wrote " << writer.manifest().files.back().name << " (" << count << " records)\n";
  }
  writer.finalize();

  corpus::CostLedger ledger;
  const auto ledger_path = config.output_dir / "cost_ledger.csv";
  if (fs::exists(ledger_path)) ledger = corpus::CostLedger::load_csv(ledger_path);
  if (generated > 0) {
    const auto label = endpoint.host_gpu.empty() ? endpoint.model_id : endpoint.host_gpu;
    ledger.add(label, endpoint.host_cost_per_hour, run_seconds);
  }
  ledger.record_count = writer.manifest().total_records();
  ledger.save_csv(ledger_path);

  const auto total = writer.manifest().total_records();
  out << "total records: " << total << "\n";
  out << "total cost: $" << money(ledger.total_cost()) << "\n";
  if (total > 0) {
    out << "cost per 1,000 records: $"
        << fixed(corpus::cost_per_thousand(ledger.total_cost(), total), 4) << "\n";
  }
  return 0;
}

int cmd_evaluate(const PipelineConfig& config, const std::vector<EvaluateRequest>& requests,
                 std::ostream& out) {
  if (requests.empty()) {
    throw Error(Errc::invalid_input, "evaluate needs at least one model=corpus pair");
  }
  const auto eval_dir = config.output_dir / "evaluation";
  fs::create_directories(eval_dir);

  std::vector<DiversityRow> diversity;
  std::vector<critic::ModelAggregate> aggregates;
  std::vector<std::pair<std::string, ranking::AxisVector>> table;

  for (const auto& request : requests) {
    auto corpus = load_eval_corpus(request.corpus);
    DiversityRow row;
    row.model_id = request.model_id;
    row.doc_count = static_cast<std::int64_t>(corpus.docs.size());
    try {
      row.sampled = config.metric_options.sample_size &&
                    *config.metric_options.sample_size > 0 &&
                    static_cast<std::size_t>(*config.metric_options.sample_size) <
                        corpus.docs.size();
      row.self_bleu =
          metrics::self_bleu(corpus.docs, config.metric_options.max_n,
                             config.metric_options.sample_size, config.metric_options.seed);
    } catch (const Error& e) {
      if (e.code() != Errc::corpus_too_small) throw;
      out << request.model_id << ": self-BLEU unavailable (" << e.what() << ")\n";
    }
    row.distinct_1 = metrics::distinct_n(corpus.docs, 1);
    row.flesch = metrics::flesch_reading_ease(corpus.docs);
    diversity.push_back(row);

    if (config.judge) {
      auto aggregate = critic::evaluate_model(request.model_id, corpus.fables, *config.judge,
                                              config.max_in_flight, config.retry);
      if (row.self_bleu) {
        ranking::AxisVector axes;
        axes.grammar = aggregate.mean_grammar;
        axes.creativity = aggregate.mean_creativity;
        axes.moral_clarity = aggregate.mean_moral;
        axes.adherence = aggregate.mean_adherence;
        axes.self_bleu = *row.self_bleu;
        axes.distinct_1 = row.distinct_1;
        axes.flesch = row.flesch;
        table.emplace_back(request.model_id, axes);
      }
      aggregates.push_back(std::move(aggregate));
    }
  }

  {
    std::ofstream csv(eval_dir / "diversity.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw Error(Errc::io_error, "cannot write diversity.csv");
    csv << "model_id,self_bleu,distinct_1,flesch_reading_ease,doc_count,sampled\n";
    for (const auto& row : diversity) {
      csv << row.model_id << ',' << (row.self_bleu ? fixed(*row.self_bleu, 6) : "n/a") << ','
          << fixed(row.distinct_1, 6) << ',' << fixed(row.flesch, 6) << ',' << row.doc_count
          << ',' << (row.sampled ? "true" : "false") << '\n';
    }
  }
  out << "model                self-BLEU  distinct-1  flesch\n";
  for (const auto& row : diversity) {
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %9s %11s %7s\n", row.model_id.c_str(),
                  row.self_bleu ? fixed(*row.self_bleu, 3).c_str() : "n/a",
                  fixed(row.distinct_1, 3).c_str(), fixed(row.flesch, 2).c_str());
    out << line;
  }

  if (config.judge) {
    std::ofstream csv(eval_dir / "critic.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw Error(Errc::io_error, "cannot write critic.csv");
    csv << "model_id,mean_grammar,mean_creativity,mean_moral_clarity,mean_adherence,"
           "mean_overall,age_A,age_B,age_C,age_D,age_E,scored,failed\n";
    for (const auto& agg : aggregates) {
      csv << agg.model_id << ',' << fixed(agg.mean_grammar, 4) << ','
          << fixed(agg.mean_creativity, 4) << ',' << fixed(agg.mean_moral, 4) << ','
          << fixed(agg.mean_adherence, 4) << ',' << fixed(agg.mean_overall, 4);
      for (char bracket = 'A'; bracket <= 'E'; ++bracket) {
        auto it = agg.age_histogram.find(bracket);
        csv << ',' << fixed(it == agg.age_histogram.end() ? 0.0 : it->second, 2);
      }
      csv << ',' << agg.scored_count << ',' << agg.failed_count << '\n';
    }
    out << "model                grammar  creativity  moral  adherence  mean\n";
    for (const auto& agg : aggregates) {
      char line[160];
      std::snprintf(line, sizeof line, "%-20s %7s %11s %6s %10s %5s\n", agg.model_id.c_str(),
                    fixed(agg.mean_grammar, 2).c_str(), fixed(agg.mean_creativity, 2).c_str(),
                    fixed(agg.mean_moral, 2).c_str(), fixed(agg.mean_adherence, 2).c_str(),
                    fixed(agg.mean_overall, 2).c_str());
      out << line;
    }
  }

  if (!table.empty()) {
    ranking::save_metrics_table(eval_dir / "metrics.csv", table);
    out << "metrics table: " << (eval_dir / "metrics.csv").string() << "\n";
  }
  return 0;
}

int cmd_rank(const PipelineConfig& config, const std::filesystem::path& table_path,
             const std::filesystem::path& out_path, std::ostream& out) {
  const auto table =
      table_path.empty() ? config.output_dir / "evaluation" / "metrics.csv" : table_path;
  const auto target = out_path.empty() ? config.output_dir / "leaderboard.csv" : out_path;
  const auto models = ranking::load_metrics_table(table);
  const auto board = ranking::rank_models(models, config.weights);
  fs::create_directories(target.parent_path());
  ranking::save_leaderboard(target, board);
  out << "rank  model                 composite\n";
  for (std::size_t i = 0; i < board.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "%4zu  %-20s  %s\n", i + 1, board[i].model_id.c_str(),
                  fixed(board[i].composite, 3).c_str());
    out << line;
  }
  out << "leaderboard: " << target.string() << "\n";
  return 0;
}

int cmd_report(const PipelineConfig& config, std::ostream& out) {
  const auto manifest = corpus::load_manifest(config.output_dir);
  const auto total = manifest.total_records();
  out << "records: " << total << "\n";
  if (total == 0) {
    out << "corpus is empty; nothing to report\n";
    return 0;
  }
  const auto records = read_manifest_records(config.output_dir, manifest);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& record : records) {
    const auto tokens = static_cast<double>(gateway::estimate_tokens(record.fable));
    sum += tokens;
    sum_sq += tokens * tokens;
  }
  const auto n = static_cast<double>(records.size());
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  out << "fable length (tokens): mean " << fixed(mean, 2) << ", stddev "
      << fixed(std::sqrt(variance), 2) << "\n";

  const auto catalog = prompt::load_catalog(config.catalog_path);
  std::array<std::unordered_map<std::string, std::int64_t>, prompt::kSlotCount> counts;
  std::int64_t unmatched = 0;
  for (const auto& record : records) {
    if (auto slots = extract_slots(record.prompt, catalog)) {
      for (int s = 0; s < prompt::kSlotCount; ++s) {
        counts[static_cast<std::size_t>(s)][(*slots)[static_cast<std::size_t>(s)]] += 1;
      }
    } else {
      unmatched += 1;
    }
  }
  out << "slot balance (min/max occurrences per value):\n";
  for (int s = 0; s < prompt::kSlotCount; ++s) {
    const auto slot = static_cast<prompt::Slot>(s);
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = 0;
    for (const auto& value : catalog.list(slot)) {
      auto it = counts[static_cast<std::size_t>(s)].find(value);
      const auto count = it == counts[static_cast<std::size_t>(s)].end() ? 0 : it->second;
      lo = std::min(lo, count);
      hi = std::max(hi, count);
    }
    out << "  " << prompt::kSlotListNames[static_cast<std::size_t>(s)] << ": " << lo << "/" << hi
        << "\n";
  }
  if (unmatched > 0) out << "  (" << unmatched << " prompts did not match the template)\n";

  const auto ledger_path = config.output_dir / "cost_ledger.csv";
  if (fs::exists(ledger_path)) {
    const auto ledger = corpus::CostLedger::load_csv(ledger_path);
    out << "cost entries:\n";
    for (const auto& entry : ledger.entries) {
      out << "  " << entry.hardware_label << ": $" << money(entry.cost) << " ("
          << fixed(entry.duration_seconds, 0) << "s at $" << money(entry.rate_per_hour)
          << "/h, minute-billed $" << money(entry.minute_billed) << ")\n";
    }
    out << "total cost: $" << money(ledger.total_cost()) << "\n";
    out << "cost per 1,000 records: $"
        << fixed(corpus::cost_per_thousand(ledger.total_cost(), total), 4) << "\n";
  }

  const auto metrics_path = config.output_dir / "evaluation" / "metrics.csv";
  if (fs::exists(metrics_path)) {
    const auto models = ranking::load_metrics_table(metrics_path);
    out << "metrics (" << models.size() << " models): " << metrics_path.string() << "\n";
  }
  const auto board_path = config.output_dir / "leaderboard.csv";
  if (fs::exists(board_path)) {
    std::ifstream in(board_path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    out << "leaderboard:\n";
    while (std::getline(in, line)) {
      if (!line.empty()) out << "  " << line << "\n";
    }
  }
  return 0;
}

}  // namespace fable::pipeline
