#include "fable/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fable/error.hpp"

namespace fable::ranking {
namespace {

constexpr const char* kTableHeader =
    "model_id,grammar,creativity,moral_clarity,adherence,self_bleu,distinct_1,flesch";

double parse_number(const std::string& field, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (...) {
    throw Error(Errc::schema_violation, context + ": not a number: \"" + field + "\"");
  }
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

}  // namespace

void validate(const WeightProfile& w) {
  const double fields[] = {w.adherence,  w.grammar,    w.moral_clarity, w.creativity,
                           w.self_bleu, w.distinct_1, w.flesch};
  double sum = 0.0;
  for (double f : fields) {
    if (f < 0.0) throw Error(Errc::invalid_input, "weights must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::invalid_input, "weights sum to " + format_number(sum) + ", expected 1");
  }
}

std::vector<double> normalize_axis(const std::vector<double>& values, bool invert) {
  if (values.size() < 2) {
    throw Error(Errc::too_few_values, "normalization needs at least 2 values, got " +
                                          std::to_string(values.size()));
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(values.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = invert ? (hi - values[i]) / span : (values[i] - lo) / span;
  }
  return out;
}

double composite_score(const AxisVector& n, const WeightProfile& weights) {
  validate(weights);
  const double fields[] = {n.grammar,   n.creativity, n.moral_clarity, n.adherence,
                           n.self_bleu, n.distinct_1, n.flesch};
  for (double f : fields) {
    if (f < -1e-9 || f > 1.0 + 1e-9) {
      throw Error(Errc::invalid_input, "normalized values must lie in [0, 1]");
    }
  }
  return weights.grammar * n.grammar + weights.creativity * n.creativity +
         weights.moral_clarity * n.moral_clarity + weights.adherence * n.adherence +
         weights.self_bleu * n.self_bleu + weights.distinct_1 * n.distinct_1 +
         weights.flesch * n.flesch;
}

std::vector<ModelScorecard> rank_models(
    const std::vector<std::pair<std::string, AxisVector>>& models, const WeightProfile& weights) {
  validate(weights);
  if (models.size() < 2) {
    throw Error(Errc::too_few_values, "ranking needs at least 2 models, got " +
                                          std::to_string(models.size()));
  }

  const auto n = models.size();
  auto column = [&](double AxisVector::* field) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = models[i].second.*field;
    return values;
  };
  const auto grammar = normalize_axis(column(&AxisVector::grammar), false);
  const auto creativity = normalize_axis(column(&AxisVector::creativity), false);
  const auto moral = normalize_axis(column(&AxisVector::moral_clarity), false);
  const auto adherence = normalize_axis(column(&AxisVector::adherence), false);
  const auto self_bleu = normalize_axis(column(&AxisVector::self_bleu), true);
  const auto distinct_1 = normalize_axis(column(&AxisVector::distinct_1), false);
  const auto flesch = normalize_axis(column(&AxisVector::flesch), false);

  std::vector<ModelScorecard> board(n);
  for (std::size_t i = 0; i < n; ++i) {
    board[i].model_id = models[i].first;
    board[i].raw = models[i].second;
    board[i].normalized = {grammar[i],   creativity[i], moral[i], adherence[i],
                           self_bleu[i], distinct_1[i], flesch[i]};
    board[i].composite = composite_score(board[i].normalized, weights);
  }
  std::sort(board.begin(), board.end(), [](const ModelScorecard& a, const ModelScorecard& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    if (a.raw.adherence != b.raw.adherence) return a.raw.adherence > b.raw.adherence;
    if (a.raw.moral_clarity != b.raw.moral_clarity) return a.raw.moral_clarity > b.raw.moral_clarity;
    return a.model_id < b.model_id;
  });
  return board;
}

std::vector<std::pair<std::string, AxisVector>> load_metrics_table(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::schema_violation, path.string() + " is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTableHeader) {
    throw Error(Errc::schema_violation,
                path.string() + ": expected header \"" + kTableHeader + "\"");
  }
  std::vector<std::pair<std::string, AxisVector>> models;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    line_no += 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw Error(Errc::schema_violation, path.string() + " line " + std::to_string(line_no) +
                                              ": expected 8 columns, got " +
                                              std::to_string(fields.size()));
    }
    const auto context = path.string() + " line " + std::to_string(line_no);
    AxisVector axes;
    axes.grammar = parse_number(fields[1], context);
    axes.creativity = parse_number(fields[2], context);
    axes.moral_clarity = parse_number(fields[3], context);
    axes.adherence = parse_number(fields[4], context);
    axes.self_bleu = parse_number(fields[5], context);
    axes.distinct_1 = parse_number(fields[6], context);
    axes.flesch = parse_number(fields[7], context);
    models.emplace_back(fields[0], axes);
  }
  return models;
}

void save_metrics_table(const std::filesystem::path& path,
                        const std::vector<std::pair<std::string, AxisVector>>& models) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << kTableHeader << '\n';
  for (const auto& [model_id, a] : models) {
    out << model_id << ',' << format_number(a.grammar) << ',' << format_number(a.creativity)
        << ',' << format_number(a.moral_clarity) << ',' << format_number(a.adherence) << ','
        << format_number(a.self_bleu) << ',' << format_number(a.distinct_1) << ','
        << format_number(a.flesch) << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

void save_leaderboard(const std::filesystem::path& path,
                      const std::vector<ModelScorecard>& board) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << "rank,model_id,composite\n";
  for (std::size_t i = 0; i < board.size(); ++i) {
    out << (i + 1) << ',' << board[i].model_id << ',' << format_number(board[i].composite)
        << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace fable::ranking
