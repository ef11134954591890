#pragma once

#include <array>
#include <string>

#include "fable/catalog.hpp"

namespace fable::testing {

/// Synthetic catalog with the given list sizes; values are "<slot><i>".
inline prompt::SlotCatalog make_catalog(const std::array<int, 6>& sizes) {
  static const char* kPrefixes[6] = {"char", "trait", "set", "conf", "res", "moral"};
  prompt::SlotCatalog catalog;
  for (int s = 0; s < prompt::kSlotCount; ++s) {
    auto& list = catalog.list(static_cast<prompt::Slot>(s));
    for (int i = 0; i < sizes[s]; ++i) {
      list.push_back(std::string(kPrefixes[s]) + std::to_string(i));
    }
  }
  return catalog;
}

}  // namespace fable::testing
