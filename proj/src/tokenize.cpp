#include "fable/metrics.hpp"
#include "fable/text.hpp"

namespace fable::metrics {

TokenizedDoc tokenize(std::string_view text) {
  TokenizedDoc doc;
  doc.tokens = fable::text::split_tokens(fable::text::to_lower(text));
  if (doc.tokens.empty()) return doc;

  bool pending_sentence = false;
  for (const auto& token : doc.tokens) {
    if (fable::text::is_sentence_terminator(token)) {
      if (pending_sentence) {
        doc.sentence_count += 1;
        pending_sentence = false;
      }
      continue;
    }
    pending_sentence = true;
    if (fable::text::is_word_token(token)) {
      doc.word_count += 1;
      doc.syllable_count += fable::text::count_syllables(token);
    }
  }
  if (pending_sentence) doc.sentence_count += 1;
  if (doc.sentence_count == 0) doc.sentence_count = 1;
  return doc;
}

}  // namespace fable::metrics
