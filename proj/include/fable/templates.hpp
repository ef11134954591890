#pragma once

#include <string>

#include "fable/catalog.hpp"

namespace fable::prompt {

/// Evaluation age brackets. B (4-7 years) is the default audience the
/// generator template targets.
enum class AgeGroup : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E' };

AgeGroup age_group_from_letter(char letter);

/// The embedded system message sent with every generation request.
extern const char* const kSystemMessage;

/// The embedded user-prompt template with {{slot}} placeholders.
extern const char* const kPromptTemplate;

/// One sampled tuple rendered against the embedded templates.
struct PromptRecord {
  SlotTuple tuple;
  std::string system_message;
  std::string user_prompt;
  std::string hash;  // sha256 of user_prompt, 64 lowercase hex
};

/// Substitutes the six slot values into the prompt template. Rendering is
/// pure: identical inputs produce byte-identical records.
PromptRecord render_prompt(const SlotCatalog& catalog, const SlotTuple& tuple,
                           AgeGroup age = AgeGroup::B);

}  // namespace fable::prompt
