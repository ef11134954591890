#include "fable/cost.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fable/error.hpp"

namespace fable::corpus {
namespace {

double round_half_up(double value, double unit) {
  return std::floor(value / unit + 0.5) * unit;
}

std::string format_money(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

double compute_cost(double rate_per_hour, double duration_seconds) {
  if (rate_per_hour < 0.0 || duration_seconds < 0.0) {
    throw Error(Errc::invalid_input, "rate and duration must be non-negative");
  }
  return round_half_up(rate_per_hour * duration_seconds / 3600.0, 0.01);
}

double minute_billed_cost(double rate_per_hour, double duration_seconds) {
  if (rate_per_hour < 0.0 || duration_seconds < 0.0) {
    throw Error(Errc::invalid_input, "rate and duration must be non-negative");
  }
  const double minutes = std::ceil(duration_seconds / 60.0);
  return round_half_up(rate_per_hour * minutes / 60.0, 0.01);
}

double cost_per_thousand(double total_cost, std::int64_t record_count) {
  if (record_count <= 0) throw Error(Errc::invalid_input, "record_count must be positive");
  return round_half_up(1000.0 * total_cost / static_cast<double>(record_count), 0.0001);
}

void CostLedger::add(const std::string& hardware_label, double rate_per_hour,
                     double duration_seconds) {
  entries.push_back({hardware_label, rate_per_hour, duration_seconds,
                     compute_cost(rate_per_hour, duration_seconds),
                     minute_billed_cost(rate_per_hour, duration_seconds)});
}

double CostLedger::total_cost() const {
  double total = 0.0;
  for (const auto& entry : entries) total += entry.cost;
  return round_half_up(total, 0.01);
}

void CostLedger::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << "hardware,rate_per_hour,duration_seconds,cost,minute_billed_cost\n";
  for (const auto& entry : entries) {
    out << entry.hardware_label << ',' << format_money(entry.rate_per_hour, 2) << ','
        << format_money(entry.duration_seconds, 3) << ',' << format_money(entry.cost, 2) << ','
        << format_money(entry.minute_billed, 2) << '\n';
  }
  out << "total,,," << format_money(total_cost(), 2) << ",\n";
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

CostLedger CostLedger::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  CostLedger ledger;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty() || line.rfind("total,", 0) == 0) continue;
    std::istringstream row(line);
    std::string label, rate, duration, cost, billed;
    if (!std::getline(row, label, ',') || !std::getline(row, rate, ',') ||
        !std::getline(row, duration, ',') || !std::getline(row, cost, ',') ||
        !std::getline(row, billed, ',')) {
      throw Error(Errc::schema_violation, path.string() + ": malformed ledger row: " + line);
    }
    CostEntry entry;
    entry.hardware_label = label;
    entry.rate_per_hour = std::stod(rate);
    entry.duration_seconds = std::stod(duration);
    entry.cost = std::stod(cost);
    entry.minute_billed = std::stod(billed);
    ledger.entries.push_back(entry);
  }
  return ledger;
}

}  // namespace fable::corpus
