#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fable::text {

/// Splits on whitespace with punctuation marks as separate tokens. An ASCII
/// apostrophe between two alphanumeric characters stays inside its token
/// ("don't" is one token). Case is preserved.
std::vector<std::string> split_tokens(std::string_view text);

/// A word is a token made of letters, possibly with internal apostrophes.
bool is_word_token(std::string_view token);

/// True when the token is a sentence terminator (".", "!" or "?").
bool is_sentence_terminator(std::string_view token);

/// Vowel-group syllable count for a single lowercase word: contiguous runs
/// of [aeiouy] count one each; a silent trailing "e" is dropped unless it is
/// the only vowel group; minimum 1.
int count_syllables(std::string_view word);

std::string to_lower(std::string_view s);

/// Current UTC time as RFC 3339, e.g. "2025-04-12T22:15:03Z".
std::string utc_now_rfc3339();

}  // namespace fable::text
