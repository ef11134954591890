#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "fable/error.hpp"
#include "fable/sampler.hpp"
#include "support/builders.hpp"

using namespace fable;
using namespace fable::prompt;
using fable::testing::make_catalog;

namespace {

using TupleSet = std::set<std::array<std::int32_t, kSlotCount>>;

TupleSet as_set(const std::vector<SlotTuple>& tuples) {
  TupleSet out;
  for (const auto& t : tuples) out.insert(t.idx);
  return out;
}

std::int64_t pair_cap(const SlotCatalog& catalog, const SamplePlan& plan) {
  const auto pairs = static_cast<double>(catalog.conflicts.size() * catalog.morals.size());
  return static_cast<std::int64_t>(
      std::ceil(plan.pair_cap_slack * static_cast<double>(plan.target_count) / pairs));
}

void check_safeguards(const SlotCatalog& catalog, const SamplePlan& plan,
                      const std::vector<SlotTuple>& tuples) {
  REQUIRE(static_cast<std::int64_t>(tuples.size()) == plan.target_count);
  for (const auto& t : tuples) CHECK_NOTHROW(check_tuple(catalog, t));

  CHECK(as_set(tuples).size() == tuples.size());

  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> pairs;
  for (const auto& t : tuples) ++pairs[{t[Slot::conflict], t[Slot::moral]}];
  const auto cap = pair_cap(catalog, plan);
  for (const auto& [key, count] : pairs) CHECK(count <= cap);

  const auto sizes = catalog.sizes();
  for (int s = 0; s < kSlotCount; ++s) {
    std::vector<std::int64_t> counts(sizes[s], 0);
    for (const auto& t : tuples) ++counts[t.idx[s]];
    const auto lo = *std::min_element(counts.begin(), counts.end());
    const auto hi = *std::max_element(counts.begin(), counts.end());
    const auto allowed = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(plan.balance_tolerance *
                                     static_cast<double>(plan.target_count) /
                                     static_cast<double>(sizes[s])));
    CHECK(hi - lo <= allowed);
  }
}

}  // namespace

TEST_CASE("requesting the whole space enumerates it exactly") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 64;
  plan.seed = 11;
  const auto tuples = sample_prompts(catalog, plan);
  REQUIRE(tuples.size() == 64);
  CHECK(as_set(tuples).size() == 64);

  // Exhaustive coverage is perfectly balanced: each value appears 32 times.
  for (int s = 0; s < kSlotCount; ++s) {
    std::array<int, 2> counts{0, 0};
    for (const auto& t : tuples) ++counts[t.idx[s]];
    CHECK(counts[0] == 32);
    CHECK(counts[1] == 32);
  }
}

TEST_CASE("a target beyond the space raises ExhaustedSpace") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 65;
  try {
    sample_prompts(catalog, plan);
    FAIL("expected ExhaustedSpace");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::exhausted_space);
  }
}

TEST_CASE("near-exhaustive targets use every safeguard") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 63;
  plan.seed = 3;
  check_safeguards(catalog, plan, sample_prompts(catalog, plan));
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const auto catalog = make_catalog({3, 3, 3, 3, 3, 3});
  SamplePlan plan;
  plan.target_count = 100;
  plan.seed = 7;
  const auto a = sample_prompts(catalog, plan);
  const auto b = sample_prompts(catalog, plan);
  CHECK(a == b);

  plan.seed = 8;
  const auto c = sample_prompts(catalog, plan);
  CHECK(a != c);
}

TEST_CASE("safeguards hold across seeds and shapes") {
  const auto catalog = make_catalog({4, 3, 5, 3, 4, 3});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SamplePlan plan;
    plan.target_count = 50;
    plan.seed = seed;
    check_safeguards(catalog, plan, sample_prompts(catalog, plan));
  }
}

TEST_CASE("safeguards hold on larger draws") {
  const auto catalog = make_catalog({8, 8, 8, 8, 8, 8});
  SamplePlan plan;
  plan.target_count = 2000;
  plan.seed = 42;
  check_safeguards(catalog, plan, sample_prompts(catalog, plan));
}

TEST_CASE("a tight pair cap makes the target unreachable") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 64;
  plan.pair_cap_slack = 0.1;
  try {
    sample_prompts(catalog, plan);
    FAIL("expected InfeasibleConstraints");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_constraints);
  }
}

TEST_CASE("non-positive targets are rejected") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 0;
  try {
    sample_prompts(catalog, plan);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("invalid plan knobs are rejected") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SamplePlan plan;
  plan.target_count = 10;
  plan.pair_cap_slack = 0.0;
  CHECK_THROWS_AS(sample_prompts(catalog, plan), Error);
  plan.pair_cap_slack = 2.0;
  plan.balance_tolerance = -0.5;
  CHECK_THROWS_AS(sample_prompts(catalog, plan), Error);
}
