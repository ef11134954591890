#pragma once

#include <cstdint>
#include <vector>

#include "fable/catalog.hpp"

namespace fable::prompt {

/// Sampling safeguards: uniqueness is absolute, (conflict, moral) pairs are
/// capped at ceil(pair_cap_slack * target / (c*l)), and per-slot value
/// counts stay within max(1, balance_tolerance * target / slot_size) of
/// each other.
struct SamplePlan {
  std::int64_t target_count = 0;
  std::uint64_t seed = 0;
  double pair_cap_slack = 2.0;
  double balance_tolerance = 0.05;
};

/// Draws exactly target_count distinct tuples under the plan's safeguards.
/// Deterministic for a fixed seed. Throws ExhaustedSpace when the target
/// exceeds the combinatorial space and InfeasibleConstraints when the caps
/// make the target unreachable.
std::vector<SlotTuple> sample_prompts(const SlotCatalog& catalog, const SamplePlan& plan);

}  // namespace fable::prompt
