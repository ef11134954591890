#include "fable/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <unordered_set>

#include "fable/error.hpp"
#include "fable/rng.hpp"

namespace fable::prompt {
namespace {

struct TupleHash {
  std::size_t operator()(const SlotTuple& t) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int s = 0; s < kSlotCount; ++s) {
      h ^= static_cast<std::uint64_t>(t.idx[s]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using TupleCount = std::unordered_map<SlotTuple, std::int64_t, TupleHash>;
using TupleSet = std::unordered_set<SlotTuple, TupleHash>;

std::uint64_t pair_key(const SlotTuple& t) {
  return (static_cast<std::uint64_t>(t.idx[3]) << 32) | static_cast<std::uint64_t>(t.idx[5]);
}

// Per-value result quotas for one slot: floor(target/L) each, with the
// remainder spread over a seeded shuffle of the value ids so no value is
// structurally favored.
std::vector<std::int64_t> slot_quotas(std::int64_t target, std::int64_t size, Rng& rng) {
  std::vector<std::int64_t> quotas(static_cast<std::size_t>(size), target / size);
  std::vector<std::int32_t> order(static_cast<std::size_t>(size));
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<std::int32_t>(v);
  rng.shuffle(order);
  for (std::int64_t i = 0; i < target % size; ++i) {
    quotas[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] += 1;
  }
  return quotas;
}

// Builds rows by stacking one shuffled column per slot. Per-slot counts
// match the quotas exactly; distinctness and pair caps are fixed up later.
std::vector<SlotTuple> zip_columns(const std::array<std::int64_t, kSlotCount>& sizes,
                                   std::int64_t count, Rng& rng) {
  std::vector<SlotTuple> rows(static_cast<std::size_t>(count));
  for (int s = 0; s < kSlotCount; ++s) {
    auto quotas = slot_quotas(count, sizes[static_cast<std::size_t>(s)], rng);
    std::vector<std::int32_t> column;
    column.reserve(static_cast<std::size_t>(count));
    for (std::size_t v = 0; v < quotas.size(); ++v) {
      column.insert(column.end(), static_cast<std::size_t>(quotas[v]),
                    static_cast<std::int32_t>(v));
    }
    rng.shuffle(column);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].idx[s] = column[i];
  }
  return rows;
}

class RepairState {
 public:
  RepairState(std::vector<SlotTuple>& rows, std::int64_t pair_cap)
      : rows_(rows), pair_cap_(pair_cap) {
    for (const auto& row : rows_) {
      row_count_[row] += 1;
      pair_count_[pair_key(row)] += 1;
    }
  }

  bool row_ok(const SlotTuple& t) const {
    auto it = row_count_.find(t);
    if (it != row_count_.end() && it->second > 1) return false;
    auto pit = pair_count_.find(pair_key(t));
    return pit == pair_count_.end() || pit->second <= pair_cap_;
  }

  std::vector<std::size_t> violations() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!row_ok(rows_[i])) out.push_back(i);
    }
    return out;
  }

  // Swaps slot s between rows i and j when the result leaves both rows
  // distinct and under the pair cap. In-column swaps keep every per-slot
  // count untouched, so balance survives any number of repairs.
  bool try_swap(std::size_t i, std::size_t j, int s) {
    if (i == j) return false;
    SlotTuple a = rows_[i];
    SlotTuple b = rows_[j];
    if (a.idx[s] == b.idx[s]) return false;
    remove(a);
    remove(b);
    std::swap(a.idx[s], b.idx[s]);
    bool ok = a != b && fits(a) && fits_with(b, a);
    if (ok) {
      insert(a);
      insert(b);
      rows_[i] = a;
      rows_[j] = b;
    } else {
      insert(rows_[i]);
      insert(rows_[j]);
    }
    return ok;
  }

 private:
  bool fits(const SlotTuple& t) const {
    auto it = row_count_.find(t);
    if (it != row_count_.end() && it->second > 0) return false;
    auto pit = pair_count_.find(pair_key(t));
    return pit == pair_count_.end() || pit->second < pair_cap_;
  }

  bool fits_with(const SlotTuple& t, const SlotTuple& pending) const {
    auto it = row_count_.find(t);
    std::int64_t dup = it == row_count_.end() ? 0 : it->second;
    if (t == pending) dup += 1;
    if (dup > 0) return false;
    auto pit = pair_count_.find(pair_key(t));
    std::int64_t pc = pit == pair_count_.end() ? 0 : pit->second;
    if (pair_key(t) == pair_key(pending)) pc += 1;
    return pc < pair_cap_;
  }

  void remove(const SlotTuple& t) {
    row_count_[t] -= 1;
    pair_count_[pair_key(t)] -= 1;
  }

  void insert(const SlotTuple& t) {
    row_count_[t] += 1;
    pair_count_[pair_key(t)] += 1;
  }

  std::vector<SlotTuple>& rows_;
  std::int64_t pair_cap_;
  TupleCount row_count_;
  std::unordered_map<std::uint64_t, std::int64_t> pair_count_;
};

// Resolves duplicate rows and over-cap (conflict, moral) pairs with random
// in-column swaps. Each accepted swap removes at least one violation, so the
// attempt budget is only a stall guard for genuinely tight instances.
void repair_rows(std::vector<SlotTuple>& rows, std::int64_t pair_cap, Rng& rng) {
  RepairState state(rows, pair_cap);
  std::int64_t budget = 200 + static_cast<std::int64_t>(rows.size()) * 64;
  while (true) {
    auto bad = state.violations();
    if (bad.empty()) return;
    bool progressed = false;
    for (std::size_t i : bad) {
      if (state.row_ok(rows[i])) continue;
      bool fixed = false;
      while (budget > 0 && !fixed) {
        budget -= 1;
        int s = static_cast<int>(rng.below(kSlotCount));
        std::size_t j = static_cast<std::size_t>(rng.below(rows.size()));
        fixed = state.try_swap(i, j, s);
      }
      if (fixed) progressed = true;
      if (budget <= 0) break;
    }
    if (!progressed || budget <= 0) {
      throw Error(Errc::infeasible_constraints,
                  "uniqueness and pair-cap repair stalled; binding constraint: "
                  "conflict-moral pair cap " +
                      std::to_string(pair_cap));
    }
  }
}

std::vector<SlotTuple> enumerate_space(const std::array<std::int64_t, kSlotCount>& sizes,
                                       SpaceSize total) {
  std::vector<SlotTuple> rows;
  rows.reserve(static_cast<std::size_t>(total));
  SlotTuple t{};
  while (true) {
    rows.push_back(t);
    int s = kSlotCount - 1;
    while (s >= 0) {
      t.idx[s] += 1;
      if (t.idx[s] < sizes[static_cast<std::size_t>(s)]) break;
      t.idx[s] = 0;
      s -= 1;
    }
    if (s < 0) break;
  }
  return rows;
}

}  // namespace

std::vector<SlotTuple> sample_prompts(const SlotCatalog& catalog, const SamplePlan& plan) {
  validate_catalog(catalog);
  if (plan.target_count < 1) {
    throw Error(Errc::invalid_input, "target_count must be a positive integer");
  }
  if (!(plan.pair_cap_slack > 0.0) || !(plan.balance_tolerance > 0.0)) {
    throw Error(Errc::invalid_input, "pair_cap_slack and balance_tolerance must be positive");
  }

  const auto sizes = catalog.sizes();
  const SpaceSize total = space_size(catalog);
  const auto target = plan.target_count;
  if (static_cast<SpaceSize>(target) > total) {
    throw Error(Errc::exhausted_space,
                "target " + std::to_string(target) + " exceeds combinatorial space " +
                    to_string(total));
  }

  const std::int64_t pairs = sizes[3] * sizes[5];
  const auto pair_cap = static_cast<std::int64_t>(
      std::ceil(plan.pair_cap_slack * static_cast<double>(target) / static_cast<double>(pairs)));
  const SpaceSize per_pair = total / static_cast<SpaceSize>(pairs);
  const SpaceSize reachable =
      static_cast<SpaceSize>(pairs) *
      std::min(static_cast<SpaceSize>(pair_cap), per_pair);
  if (reachable < static_cast<SpaceSize>(target)) {
    throw Error(Errc::infeasible_constraints,
                "conflict-moral pair cap " + std::to_string(pair_cap) + " admits at most " +
                    to_string(reachable) + " tuples, below target " + std::to_string(target));
  }

  Rng rng(plan.seed);

  if (static_cast<SpaceSize>(target) == total) {
    auto rows = enumerate_space(sizes, total);
    rng.shuffle(rows);
    return rows;
  }

  // Near exhaustion the column construction would collide constantly, so
  // sample the excluded complement instead and keep the rest of the space.
  if (total < static_cast<SpaceSize>(target) * 2) {
    const auto excl_count = static_cast<std::int64_t>(total) - target;
    std::vector<SlotTuple> excl(static_cast<std::size_t>(excl_count));
    for (int s = 0; s < kSlotCount; ++s) {
      const std::int64_t full = static_cast<std::int64_t>(total) / sizes[static_cast<std::size_t>(s)];
      auto keep = slot_quotas(target, sizes[static_cast<std::size_t>(s)], rng);
      std::vector<std::int32_t> column;
      column.reserve(static_cast<std::size_t>(excl_count));
      for (std::size_t v = 0; v < keep.size(); ++v) {
        column.insert(column.end(), static_cast<std::size_t>(full - keep[v]),
                      static_cast<std::int32_t>(v));
      }
      rng.shuffle(column);
      for (std::size_t i = 0; i < excl.size(); ++i) excl[i].idx[s] = column[i];
    }
    if (excl_count > 0) {
      repair_rows(excl, static_cast<std::int64_t>(per_pair), rng);
    }
    TupleSet excluded(excl.begin(), excl.end());
    auto all = enumerate_space(sizes, total);
    std::vector<SlotTuple> rows;
    rows.reserve(static_cast<std::size_t>(target));
    for (const auto& t : all) {
      if (!excluded.contains(t)) rows.push_back(t);
    }
    repair_rows(rows, pair_cap, rng);
    rng.shuffle(rows);
    return rows;
  }

  auto rows = zip_columns(sizes, target, rng);
  repair_rows(rows, pair_cap, rng);
  rng.shuffle(rows);
  return rows;
}

}  // namespace fable::prompt
