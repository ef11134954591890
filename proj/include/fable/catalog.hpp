#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fable::prompt {

enum class Slot : int {
  character = 0,
  trait = 1,
  setting = 2,
  conflict = 3,
  resolution = 4,
  moral = 5,
};

inline constexpr int kSlotCount = 6;
inline constexpr std::array<const char*, kSlotCount> kSlotListNames = {
    "characters", "traits", "settings", "conflicts", "resolutions", "morals"};

/// The six named value lists the prompt space is built from.
struct SlotCatalog {
  std::vector<std::string> characters;
  std::vector<std::string> traits;
  std::vector<std::string> settings;
  std::vector<std::string> conflicts;
  std::vector<std::string> resolutions;
  std::vector<std::string> morals;

  const std::vector<std::string>& list(Slot slot) const;
  std::vector<std::string>& list(Slot slot);

  // List lengths in slot order (n, m, k, c, r, l).
  std::array<std::int64_t, kSlotCount> sizes() const;
};

/// One point in the combinatorial space: an index into each slot list.
struct SlotTuple {
  std::array<std::int32_t, kSlotCount> idx{};

  std::int32_t operator[](Slot slot) const { return idx[static_cast<int>(slot)]; }
  std::int32_t& operator[](Slot slot) { return idx[static_cast<int>(slot)]; }
  bool operator==(const SlotTuple&) const = default;
};

using SpaceSize = unsigned __int128;

std::string to_string(SpaceSize value);

/// Validates list presence, trimmed-non-empty entries and within-list
/// uniqueness. Throws MissingList / EmptyEntry / DuplicateEntry naming the
/// offending list and index.
void validate_catalog(const SlotCatalog& catalog);

/// Loads and validates a catalog from a JSON file with the six top-level
/// list keys. Throws IoError on unreadable/unparseable files.
SlotCatalog load_catalog(const std::filesystem::path& source);

/// Exact product of the six list sizes.
SpaceSize space_size(const SlotCatalog& catalog);

/// Throws IndexOutOfRange unless every index addresses its list.
void check_tuple(const SlotCatalog& catalog, const SlotTuple& tuple);

}  // namespace fable::prompt
