#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fable::metrics {

struct TokenizedDoc {
  std::vector<std::string> tokens;
  std::int64_t sentence_count = 0;
  std::int64_t word_count = 0;
  std::int64_t syllable_count = 0;
};

struct DiversityReport {
  double self_bleu = 0.0;
  double distinct_1 = 0.0;
  double flesch_reading_ease = 0.0;
  std::int64_t doc_count = 0;
  bool sampled = false;
};

struct MetricOptions {
  int max_n = 4;
  std::optional<std::int64_t> sample_size;
  std::uint64_t seed = 0;
};

/// Lowercases, splits on whitespace with punctuation as separate tokens, and
/// derives the word, sentence, and syllable counts. Empty text yields an
/// all-zero doc.
TokenizedDoc tokenize(std::string_view text);

/// Unique n-grams pooled over the corpus divided by total n-gram
/// occurrences. Throws EmptyCorpus when no doc has n tokens.
double distinct_n(const std::vector<TokenizedDoc>& docs, int n);

/// Unsmoothed BLEU: geometric mean of modified n-gram precisions for
/// n = 1..min(max_n, candidate length), brevity penalty against the closest
/// reference length (ties to the shorter). Any zero precision scores 0.
double bleu_doc(const TokenizedDoc& candidate, const std::vector<TokenizedDoc>& references,
                int max_n = 4);

/// Mean leave-one-out BLEU of each evaluated doc against the rest. With
/// sample_size set below the corpus size, evaluates a seed-deterministic
/// sample of candidates while keeping full remainders as references.
double self_bleu(const std::vector<TokenizedDoc>& docs, int max_n = 4,
                 std::optional<std::int64_t> sample_size = std::nullopt, std::uint64_t seed = 0);

/// 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words), pooled.
double flesch_reading_ease(const std::vector<TokenizedDoc>& docs);

/// Bundles the three metrics for one corpus. Throws CorpusTooSmall below
/// two docs.
DiversityReport compute_diversity(const std::vector<TokenizedDoc>& docs,
                                  const MetricOptions& options = {});

/// Loads documents from a JSONL corpus (the "fable" field of each line) or
/// from a directory of .txt files, one doc per file, in filename order.
std::vector<TokenizedDoc> load_corpus(const std::filesystem::path& path);

}  // namespace fable::metrics
