#include "fable/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fable/error.hpp"
#include "fable/rng.hpp"

namespace fable::metrics {
namespace {

// N-grams are joined with an unlikely separator byte so map keys stay cheap
// plain strings.
constexpr char kSep = '\x1f';

std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start, int n) {
  std::string key = tokens[start];
  for (int i = 1; i < n; ++i) {
    key.push_back(kSep);
    key += tokens[start + static_cast<std::size_t>(i)];
  }
  return key;
}

using CountMap = std::unordered_map<std::string, std::int64_t>;

CountMap ngram_counts(const std::vector<std::string>& tokens, int n) {
  CountMap counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  const std::size_t last = tokens.size() - static_cast<std::size_t>(n);
  for (std::size_t i = 0; i <= last; ++i) counts[ngram_key(tokens, i, n)] += 1;
  return counts;
}

// Closest reference length with ties to the shorter, per the classical BLEU
// brevity convention.
std::int64_t closest_length(std::int64_t cand, const std::vector<std::int64_t>& ref_lengths) {
  auto gap = [cand](std::int64_t len) { return len > cand ? len - cand : cand - len; };
  std::int64_t best = ref_lengths.front();
  for (std::int64_t len : ref_lengths) {
    if (gap(len) < gap(best) || (gap(len) == gap(best) && len < best)) best = len;
  }
  return best;
}

double brevity_penalty(std::int64_t cand, std::int64_t ref) {
  if (cand >= ref) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref) / static_cast<double>(cand));
}

}  // namespace

double distinct_n(const std::vector<TokenizedDoc>& docs, int n) {
  if (n < 1) throw Error(Errc::invalid_input, "n must be >= 1");
  std::unordered_set<std::string> unique;
  std::int64_t total = 0;
  for (const auto& doc : docs) {
    if (doc.tokens.size() < static_cast<std::size_t>(n)) continue;
    const std::size_t last = doc.tokens.size() - static_cast<std::size_t>(n);
    for (std::size_t i = 0; i <= last; ++i) {
      unique.insert(ngram_key(doc.tokens, i, n));
      total += 1;
    }
  }
  if (total == 0) {
    throw Error(Errc::empty_corpus, "no document holds " + std::to_string(n) + " tokens");
  }
  return static_cast<double>(unique.size()) / static_cast<double>(total);
}

double bleu_doc(const TokenizedDoc& candidate, const std::vector<TokenizedDoc>& references,
                int max_n) {
  if (max_n < 1) throw Error(Errc::invalid_input, "max_n must be >= 1");
  if (candidate.tokens.empty()) throw Error(Errc::empty_candidate, "candidate has no tokens");
  if (references.empty()) throw Error(Errc::no_references, "reference list is empty");

  const auto cand_len = static_cast<std::int64_t>(candidate.tokens.size());
  const int top_n = static_cast<int>(std::min<std::int64_t>(max_n, cand_len));

  double log_sum = 0.0;
  for (int n = 1; n <= top_n; ++n) {
    const auto cand_counts = ngram_counts(candidate.tokens, n);
    CountMap ref_max;
    for (const auto& ref : references) {
      for (const auto& [key, count] : ngram_counts(ref.tokens, n)) {
        auto& slot = ref_max[key];
        slot = std::max(slot, count);
      }
    }
    std::int64_t clipped = 0;
    std::int64_t total = 0;
    for (const auto& [key, count] : cand_counts) {
      auto it = ref_max.find(key);
      if (it != ref_max.end()) clipped += std::min(count, it->second);
      total += count;
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }

  std::vector<std::int64_t> ref_lengths;
  ref_lengths.reserve(references.size());
  for (const auto& ref : references) {
    ref_lengths.push_back(static_cast<std::int64_t>(ref.tokens.size()));
  }
  const double bp = brevity_penalty(cand_len, closest_length(cand_len, ref_lengths));
  return bp * std::exp(log_sum / top_n);
}

double self_bleu(const std::vector<TokenizedDoc>& docs, int max_n,
                 std::optional<std::int64_t> sample_size, std::uint64_t seed) {
  if (max_n < 1) throw Error(Errc::invalid_input, "max_n must be >= 1");
  if (docs.size() < 2) {
    throw Error(Errc::corpus_too_small, "self-BLEU needs at least 2 documents, got " +
                                            std::to_string(docs.size()));
  }

  std::vector<std::size_t> evaluated;
  if (sample_size && *sample_size > 0 &&
      static_cast<std::size_t>(*sample_size) < docs.size()) {
    Rng rng(seed);
    evaluated = rng.sample_indices(docs.size(), static_cast<std::size_t>(*sample_size));
    std::sort(evaluated.begin(), evaluated.end());
  } else {
    evaluated.resize(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) evaluated[i] = i;
  }

  // One pass per order n builds, for every n-gram, the two largest per-doc
  // counts and who holds the largest. The clip against "all other docs" for
  // candidate d is then second-best when d holds the best, best otherwise,
  // which turns the leave-one-out sweep from quadratic to linear.
  struct Top2 {
    std::int64_t best = 0;
    std::int64_t second = 0;
    std::size_t best_doc = 0;
  };

  std::vector<std::unordered_map<std::string, Top2>> pooled(
      static_cast<std::size_t>(max_n));
  std::vector<std::vector<CountMap>> per_doc(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    per_doc[d].reserve(static_cast<std::size_t>(max_n));
    for (int n = 1; n <= max_n; ++n) {
      per_doc[d].push_back(ngram_counts(docs[d].tokens, n));
      for (const auto& [key, count] : per_doc[d].back()) {
        auto& top = pooled[static_cast<std::size_t>(n - 1)][key];
        if (count > top.best) {
          if (top.best > 0 && top.best_doc != d) top.second = top.best;
          top.best = count;
          top.best_doc = d;
        } else if (top.best_doc != d && count > top.second) {
          top.second = count;
        }
      }
    }
  }

  std::vector<std::int64_t> lengths;
  lengths.reserve(docs.size());
  for (const auto& doc : docs) lengths.push_back(static_cast<std::int64_t>(doc.tokens.size()));
  auto sorted_lengths = lengths;
  std::sort(sorted_lengths.begin(), sorted_lengths.end());

  double total = 0.0;
  for (std::size_t d : evaluated) {
    const auto cand_len = lengths[d];
    if (cand_len == 0) throw Error(Errc::empty_candidate, "candidate has no tokens");
    const int top_n = static_cast<int>(std::min<std::int64_t>(max_n, cand_len));

    double score = 0.0;
    double log_sum = 0.0;
    bool zero = false;
    for (int n = 1; n <= top_n && !zero; ++n) {
      const auto& counts = per_doc[d][static_cast<std::size_t>(n - 1)];
      const auto& top_map = pooled[static_cast<std::size_t>(n - 1)];
      std::int64_t clipped = 0;
      std::int64_t denom = 0;
      for (const auto& [key, count] : counts) {
        const auto& top = top_map.at(key);
        const std::int64_t other_max = top.best_doc == d ? top.second : top.best;
        clipped += std::min(count, other_max);
        denom += count;
      }
      if (clipped == 0) {
        zero = true;
      } else {
        log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(denom));
      }
    }
    if (!zero) {
      // Closest other-doc length via the sorted array, skipping one
      // occurrence of the candidate's own length.
      auto lo = std::lower_bound(sorted_lengths.begin(), sorted_lengths.end(), cand_len);
      std::int64_t ref;
      if (lo + 1 != sorted_lengths.end() && *(lo + 1) == cand_len) {
        ref = cand_len;
      } else {
        std::optional<std::int64_t> below;
        std::optional<std::int64_t> above;
        if (lo != sorted_lengths.begin()) below = *(lo - 1);
        if (lo + 1 != sorted_lengths.end()) above = *(lo + 1);
        if (!below) {
          ref = *above;
        } else if (!above) {
          ref = *below;
        } else {
          ref = (cand_len - *below) <= (*above - cand_len) ? *below : *above;
        }
      }
      score = brevity_penalty(cand_len, ref) * std::exp(log_sum / top_n);
    }
    total += score;
  }
  return total / static_cast<double>(evaluated.size());
}

double flesch_reading_ease(const std::vector<TokenizedDoc>& docs) {
  std::int64_t words = 0;
  std::int64_t sentences = 0;
  std::int64_t syllables = 0;
  for (const auto& doc : docs) {
    words += doc.word_count;
    sentences += doc.sentence_count;
    syllables += doc.syllable_count;
  }
  if (words < 1 || sentences < 1) {
    throw Error(Errc::empty_corpus, "readability needs at least one word and sentence");
  }
  return 206.835 - 1.015 * (static_cast<double>(words) / static_cast<double>(sentences)) -
         84.6 * (static_cast<double>(syllables) / static_cast<double>(words));
}

DiversityReport compute_diversity(const std::vector<TokenizedDoc>& docs,
                                  const MetricOptions& options) {
  DiversityReport report;
  report.doc_count = static_cast<std::int64_t>(docs.size());
  report.sampled = options.sample_size && *options.sample_size > 0 &&
                   static_cast<std::size_t>(*options.sample_size) < docs.size();
  report.self_bleu = self_bleu(docs, options.max_n, options.sample_size, options.seed);
  report.distinct_1 = distinct_n(docs, 1);
  report.flesch_reading_ease = flesch_reading_ease(docs);
  return report;
}

std::vector<TokenizedDoc> load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    throw Error(Errc::io_error, "corpus path does not exist: " + path.string());
  }
  std::vector<TokenizedDoc> docs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error(Errc::io_error, "cannot read " + file.string());
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      docs.push_back(tokenize(text));
    }
    return docs;
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
      throw Error(Errc::schema_violation,
                  path.string() + " line " + std::to_string(line_no) + ": expected a JSON object with a string \"fable\" field");
    }
    docs.push_back(tokenize(parsed["fable"].get<std::string>()));
  }
  return docs;
}

}  // namespace fable::metrics
