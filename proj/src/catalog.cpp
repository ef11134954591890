#include "fable/catalog.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <unordered_set>

#include "fable/error.hpp"

namespace fable::prompt {

const std::vector<std::string>& SlotCatalog::list(Slot slot) const {
  switch (slot) {
    case Slot::character: return characters;
    case Slot::trait: return traits;
    case Slot::setting: return settings;
    case Slot::conflict: return conflicts;
    case Slot::resolution: return resolutions;
    case Slot::moral: return morals;
  }
  throw Error(Errc::invalid_input, "unknown slot");
}

std::vector<std::string>& SlotCatalog::list(Slot slot) {
  return const_cast<std::vector<std::string>&>(
      static_cast<const SlotCatalog&>(*this).list(slot));
}

std::array<std::int64_t, kSlotCount> SlotCatalog::sizes() const {
  std::array<std::int64_t, kSlotCount> out{};
  for (int s = 0; s < kSlotCount; ++s) {
    out[s] = static_cast<std::int64_t>(list(static_cast<Slot>(s)).size());
  }
  return out;
}

std::string to_string(SpaceSize value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return out;
}

namespace {

bool is_blank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
  }
  return true;
}

}  // namespace

void validate_catalog(const SlotCatalog& catalog) {
  for (int s = 0; s < kSlotCount; ++s) {
    const auto& name = kSlotListNames[s];
    const auto& values = catalog.list(static_cast<Slot>(s));
    if (values.empty()) {
      throw Error(Errc::missing_list, std::string("list \"") + name + "\" is missing or empty");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (is_blank(values[i])) {
        throw Error(Errc::empty_entry,
                    std::string("list \"") + name + "\" entry " + std::to_string(i) + " is empty");
      }
      if (!seen.insert(values[i]).second) {
        throw Error(Errc::duplicate_entry, std::string("list \"") + name + "\" entry " +
                                               std::to_string(i) + " duplicates \"" + values[i] +
                                               "\"");
      }
    }
  }
}

SlotCatalog load_catalog(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) {
    throw Error(Errc::io_error, "cannot open catalog file " + source.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, "catalog file " + source.string() + " is not valid JSON: " + e.what());
  }

  SlotCatalog catalog;
  for (int s = 0; s < kSlotCount; ++s) {
    const auto& name = kSlotListNames[s];
    if (!doc.contains(name) || !doc[name].is_array()) {
      throw Error(Errc::missing_list, std::string("list \"") + name + "\" is missing");
    }
    auto& values = catalog.list(static_cast<Slot>(s));
    for (const auto& item : doc[name]) {
      if (!item.is_string()) {
        throw Error(Errc::empty_entry, std::string("list \"") + name + "\" entry " +
                                           std::to_string(values.size()) + " is not a string");
      }
      values.push_back(item.get<std::string>());
    }
  }
  validate_catalog(catalog);
  return catalog;
}

SpaceSize space_size(const SlotCatalog& catalog) {
  SpaceSize product = 1;
  for (std::int64_t size : catalog.sizes()) {
    const SpaceSize next = product * static_cast<SpaceSize>(size);
    if (size != 0 && next / static_cast<SpaceSize>(size) != product) {
      throw Error(Errc::invalid_input, "combinatorial space exceeds 128-bit range");
    }
    product = next;
  }
  return product;
}

void check_tuple(const SlotCatalog& catalog, const SlotTuple& tuple) {
  for (int s = 0; s < kSlotCount; ++s) {
    const auto slot = static_cast<Slot>(s);
    const auto size = static_cast<std::int64_t>(catalog.list(slot).size());
    if (tuple[slot] < 0 || tuple[slot] >= size) {
      throw Error(Errc::index_out_of_range,
                  std::string("slot \"") + kSlotListNames[s] + "\" index " +
                      std::to_string(tuple[slot]) + " not in [0, " + std::to_string(size) + ")");
    }
  }
}

}  // namespace fable::prompt
