#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fable/config.hpp"
#include "fable/error.hpp"
#include "fable/pipeline.hpp"
#include "fable/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_in_flight;
  std::optional<std::int64_t> chunk_size;
  std::string out_dir;
  std::string weights_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "pipeline config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the sampling seed");
  cmd->add_option("--max-in-flight", args.max_in_flight, "override request concurrency");
  cmd->add_option("--chunk-size", args.chunk_size, "override records per output chunk");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--weights", args.weights_path, "JSON file overriding ranking weights");
}

fable::ranking::WeightProfile load_weights_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fable::Error(fable::Errc::io_error, "cannot read weights " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw fable::Error(fable::Errc::invalid_input, "weights file is not a JSON object");
  }
  fable::ranking::WeightProfile weights;
  weights.adherence = doc.value("adherence", weights.adherence);
  weights.grammar = doc.value("grammar", weights.grammar);
  weights.moral_clarity = doc.value("moral_clarity", weights.moral_clarity);
  weights.creativity = doc.value("creativity", weights.creativity);
  weights.self_bleu = doc.value("self_bleu", weights.self_bleu);
  weights.distinct_1 = doc.value("distinct_1", weights.distinct_1);
  weights.flesch = doc.value("flesch", weights.flesch);
  fable::ranking::validate(weights);
  return weights;
}

fable::PipelineConfig resolve_config(const CommonArgs& args) {
  auto config = fable::load_config(args.config_path);
  if (args.seed) config.plan.seed = *args.seed;
  if (args.max_in_flight) config.max_in_flight = *args.max_in_flight;
  if (args.chunk_size) config.chunk_size = *args.chunk_size;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (!args.weights_path.empty()) config.weights = load_weights_file(args.weights_path);
  if (config.max_in_flight < 1) {
    throw fable::Error(fable::Errc::invalid_input, "--max-in-flight must be >= 1");
  }
  if (config.chunk_size < 1) {
    throw fable::Error(fable::Errc::invalid_input, "--chunk-size must be >= 1");
  }
  return config;
}

std::vector<fable::pipeline::EvaluateRequest> parse_corpora(
    const std::vector<std::string>& pairs) {
  std::vector<fable::pipeline::EvaluateRequest> requests;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
      throw fable::Error(fable::Errc::invalid_input,
                         "corpus argument must look like model_id=path, got \"" + pair + "\"");
    }
    requests.push_back({pair.substr(0, eq), pair.substr(eq + 1)});
  }
  return requests;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial fable generation pipeline"};
  app.set_version_flag("--version", fable::kPipelineVersion);
  app.require_subcommand(1);

  CommonArgs gen_args;
  auto* generate = app.add_subcommand("generate", "sample prompts and generate the corpus");
  add_common(generate, gen_args);

  CommonArgs eval_args;
  std::vector<std::string> corpora;
  auto* evaluate = app.add_subcommand("evaluate", "score corpora with metrics and the judge");
  add_common(evaluate, eval_args);
  evaluate->add_option("corpora", corpora, "model_id=corpus_path pairs")->required();

  CommonArgs rank_args;
  std::string table_path;
  std::string board_path;
  auto* rank = app.add_subcommand("rank", "rank models from a metrics table");
  add_common(rank, rank_args);
  rank->add_option("--table", table_path, "metrics table (default: evaluation/metrics.csv)");
  rank->add_option("--leaderboard", board_path, "output path (default: leaderboard.csv)");

  CommonArgs report_args;
  auto* report = app.add_subcommand("report", "summarize a generated corpus");
  add_common(report, report_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return fable::pipeline::cmd_generate(resolve_config(gen_args), std::cout);
    }
    if (evaluate->parsed()) {
      return fable::pipeline::cmd_evaluate(resolve_config(eval_args), parse_corpora(corpora),
                                           std::cout);
    }
    if (rank->parsed()) {
      return fable::pipeline::cmd_rank(resolve_config(rank_args), table_path, board_path,
                                       std::cout);
    }
    if (report->parsed()) {
      return fable::pipeline::cmd_report(resolve_config(report_args), std::cout);
    }
  } catch (const fable::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
