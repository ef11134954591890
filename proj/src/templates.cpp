#include "fable/templates.hpp"

#include <array>

#include "fable/error.hpp"
#include "fable/sha256.hpp"

namespace fable::prompt {

const char* const kSystemMessage =
    "You are a world-class creative assistant that generates captivating and morally-driven fables based \n"
    "on structured inputs.\n"
    "Each fable must be:\n"
    "- Imaginative and coherent.\n"
    "- Appropriate for a wide audience, including young readers.\n"
    "- Structured around a classic fable format (character, setting, conflict, resolution, and moral).\n"
    "\n"
    "Age groups are defined as:\n"
    "- A: 3 years or under\n"
    "- B: 4-7 years\n"
    "- C: 8-11 years\n"
    "- D: 12-15 years\n"
    "- E: 16 years or above";

const char* const kPromptTemplate =
    "Create a fable based on the following elements. Weave them naturally into a story:\n"
    "- Main Character: a {{trait}} {{character}}\n"
    "- Setting: a {{setting}} where our story unfolds\n"
    "- Challenge: {{conflict}}\n"
    "- Outcome: {{resolution}}\n"
    "- Teaching: {{moral}}\n"
    "The fable should:\n"
    "- Be appropriate for age group {{age_group}} ({{age_range}})\n"
    "- Use simple vocabulary that {{age_audience}} can understand\n"
    "- Use concrete rather than abstract language\n"
    "- Begin with vivid scene-setting\n"
    "- Not use names for the characters, instead use the trait and character\n"
    "- Include meaningful but simple dialogue\n"
    "- Show (don't tell) the character's growth\n"
    "- End with a clear connection to the moral\n"
    "Keep the story concise but engaging, around 250 words.";

AgeGroup age_group_from_letter(char letter) {
  switch (letter) {
    case 'A': case 'a': return AgeGroup::A;
    case 'B': case 'b': return AgeGroup::B;
    case 'C': case 'c': return AgeGroup::C;
    case 'D': case 'd': return AgeGroup::D;
    case 'E': case 'e': return AgeGroup::E;
    default:
      throw Error(Errc::invalid_input, std::string("age group letter \"") + letter + "\"");
  }
}

namespace {

struct AgePhrases {
  const char* range;     // parenthetical in the age-group line
  const char* audience;  // subject of the vocabulary line
};

AgePhrases age_phrases(AgeGroup age) {
  switch (age) {
    case AgeGroup::A: return {"3 years or under", "children aged 3 or under"};
    case AgeGroup::B: return {"4-7 years", "4-7 year olds"};
    case AgeGroup::C: return {"8-11 years", "8-11 year olds"};
    case AgeGroup::D: return {"12-15 years", "12-15 year olds"};
    case AgeGroup::E: return {"16 years or above", "readers aged 16 or above"};
  }
  throw Error(Errc::invalid_input, "unknown age group");
}

void replace_all(std::string& text, std::string_view placeholder, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

}  // namespace

PromptRecord render_prompt(const SlotCatalog& catalog, const SlotTuple& tuple, AgeGroup age) {
  check_tuple(catalog, tuple);

  std::string prompt = kPromptTemplate;
  replace_all(prompt, "{{character}}", catalog.characters[tuple[Slot::character]]);
  replace_all(prompt, "{{trait}}", catalog.traits[tuple[Slot::trait]]);
  replace_all(prompt, "{{setting}}", catalog.settings[tuple[Slot::setting]]);
  replace_all(prompt, "{{conflict}}", catalog.conflicts[tuple[Slot::conflict]]);
  replace_all(prompt, "{{resolution}}", catalog.resolutions[tuple[Slot::resolution]]);
  replace_all(prompt, "{{moral}}", catalog.morals[tuple[Slot::moral]]);

  const AgePhrases phrases = age_phrases(age);
  replace_all(prompt, "{{age_group}}", std::string(1, static_cast<char>(age)));
  replace_all(prompt, "{{age_range}}", phrases.range);
  replace_all(prompt, "{{age_audience}}", phrases.audience);

  PromptRecord record;
  record.tuple = tuple;
  record.system_message = kSystemMessage;
  record.user_prompt = std::move(prompt);
  record.hash = sha256_hex(record.user_prompt);
  return record;
}

}  // namespace fable::prompt
