#include "fable/text.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>

namespace fable::text {

namespace {

bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }
bool is_alnum_byte(unsigned char c) { return std::isalnum(c) != 0; }
bool is_letter_byte(unsigned char c) { return std::isalpha(c) != 0; }

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (is_space_byte(c)) {
      ++i;
      continue;
    }
    if (is_alnum_byte(c) || c >= 0x80) {
      // Token of letters/digits/multibyte chars, apostrophes allowed inside.
      std::size_t j = i;
      while (j < n) {
        const unsigned char cj = static_cast<unsigned char>(s[j]);
        if (is_alnum_byte(cj) || cj >= 0x80) {
          ++j;
        } else if (s[j] == '\'' && j + 1 < n && j > i &&
                   (is_alnum_byte(static_cast<unsigned char>(s[j + 1])) ||
                    static_cast<unsigned char>(s[j + 1]) >= 0x80)) {
          ++j;
        } else {
          break;
        }
      }
      tokens.emplace_back(s.substr(i, j - i));
      i = j;
    } else {
      // Each punctuation mark is its own token.
      tokens.emplace_back(1, s[i]);
      ++i;
    }
  }
  return tokens;
}

bool is_word_token(std::string_view token) {
  bool has_letter = false;
  for (char ch : token) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (is_letter_byte(c)) {
      has_letter = true;
    } else if (ch != '\'') {
      return false;
    }
  }
  return has_letter;
}

bool is_sentence_terminator(std::string_view token) {
  return token == "." || token == "!" || token == "?";
}

int count_syllables(std::string_view word) {
  int groups = 0;
  bool in_group = false;
  bool last_group_is_final_e = false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(word[i]);
    if (!is_letter_byte(c)) {
      in_group = false;
      continue;
    }
    const char lc = static_cast<char>(std::tolower(c));
    if (is_vowel(lc)) {
      if (!in_group) {
        ++groups;
        in_group = true;
        last_group_is_final_e = (lc == 'e' && i + 1 == word.size());
      } else {
        last_group_is_final_e = false;
      }
    } else {
      in_group = false;
    }
  }
  if (last_group_is_final_e && groups > 1) --groups;
  return groups > 0 ? groups : 1;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string utc_now_rfc3339() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace fable::text
