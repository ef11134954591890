#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fable::corpus {

/// Hourly rate times duration in seconds over 3600, rounded to cents
/// half-up. The canonical formula; minute_billed_cost covers providers that
/// round the duration up to whole minutes first.
double compute_cost(double rate_per_hour, double duration_seconds);
double minute_billed_cost(double rate_per_hour, double duration_seconds);

/// 1000 * total / count, reported to 4 decimal places.
double cost_per_thousand(double total_cost, std::int64_t record_count);

struct CostEntry {
  std::string hardware_label;
  double rate_per_hour = 0.0;
  double duration_seconds = 0.0;
  double cost = 0.0;
  double minute_billed = 0.0;
};

struct CostLedger {
  std::vector<CostEntry> entries;
  std::int64_t record_count = 0;

  void add(const std::string& hardware_label, double rate_per_hour, double duration_seconds);
  double total_cost() const;

  /// CSV with columns hardware,rate_per_hour,duration_seconds,cost,
  /// minute_billed_cost plus a totals row.
  void save_csv(const std::filesystem::path& path) const;
  static CostLedger load_csv(const std::filesystem::path& path);
};

}  // namespace fable::corpus
