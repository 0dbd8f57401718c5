#include "nbf/normalizer.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nbf {

TypeStats compute_type_stats(std::span<const LineScore> scores) {
  std::map<LineType, std::vector<double>> pools;
  for (const auto& s : scores) pools[s.line_type].push_back(s.entropy);

  TypeStats stats;
  for (const auto& [type, values] : pools) {
    TypeStat st;
    st.sample_count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(values.size()));
    stats.emplace(type, st);
  }
  return stats;
}

double zscore(const LineScore& score, const TypeStats& stats) {
  const auto it = stats.find(score.line_type);
  if (it == stats.end())
    throw std::out_of_range("no type statistics for line type " +
                            std::string(to_string(score.line_type)));
  const auto& st = it->second;
  if (st.sample_count < 2 || st.sd == 0.0) return 0.0;
  return (score.entropy - st.mean) / st.sd;
}

double BugWeightTable::weight_of(LineType type) const {
  const auto it = rows.find(type);
  return it == rows.end() ? unseen_weight : it->second.weight;
}

void BugWeightTable::write(std::ostream& out) const {
  out << "# training=" << training_range << '\n';
  out << "# unseen_weight=" << std::setprecision(17) << unseen_weight << '\n';
  for (const auto& [type, row] : rows) {
    out << to_string(type) << '\t' << row.bugs << '\t' << row.lines << '\t'
        << std::setprecision(17) << row.weight << '\n';
  }
}

BugWeightTable BugWeightTable::read(std::istream& in) {
  BugWeightTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# training=", 0) == 0) {
      table.training_range = line.substr(11);
      continue;
    }
    if (line.rfind("# unseen_weight=", 0) == 0) {
      table.unseen_weight = std::stod(line.substr(16));
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name;
    BugWeightRow row;
    if (!(std::getline(fields, name, '\t') && fields >> row.bugs >> row.lines >> row.weight))
      throw std::runtime_error("bug weight table line " + std::to_string(line_no) + ": malformed row");
    const auto type = parse_line_type(name);
    if (!type)
      throw std::runtime_error("bug weight table line " + std::to_string(line_no) +
                               ": unknown line type '" + name + "'");
    table.rows[*type] = row;
  }
  return table;
}

BugWeightTable train_bug_weights(std::span<const LabeledLine> history, std::string training_range) {
  BugWeightTable table;
  table.training_range = std::move(training_range);
  std::size_t total_bugs = 0;
  for (const auto& l : history) {
    auto& row = table.rows[l.type];
    ++row.lines;
    if (l.buggy) {
      ++row.bugs;
      ++total_bugs;
    }
  }
  if (total_bugs == 0) throw std::invalid_argument("no training signal");

  double rate_sum = 0.0;
  for (const auto& [type, row] : table.rows)
    rate_sum += static_cast<double>(row.bugs) / static_cast<double>(row.lines);
  for (auto& [type, row] : table.rows)
    row.weight = static_cast<double>(row.bugs) / static_cast<double>(row.lines) / rate_sum;
  table.unseen_weight = rate_sum / static_cast<double>(table.rows.size()) / rate_sum;
  return table;
}

double weighted_score(double z, const BugWeightTable& weights, LineType type) {
  return z * weights.weight_of(type);
}

void normalize_scores(std::span<LineScore> scores, const BugWeightTable* weights) {
  const auto stats = compute_type_stats(scores);
  for (auto& s : scores) {
    s.z = zscore(s, stats);
    s.weighted = weights ? weighted_score(s.z, *weights, s.line_type) : s.z;
  }
}

}  // namespace nbf
