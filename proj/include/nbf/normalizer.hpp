#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

#include "nbf/line_type.hpp"
#include "nbf/scorer.hpp"

namespace nbf {

struct TypeStat {
  double mean = 0.0;
  double sd = 0.0;  // population SD
  std::size_t sample_count = 0;
};

using TypeStats = std::map<LineType, TypeStat>;

TypeStats compute_type_stats(std::span<const LineScore> scores);

// (entropy - mean) / sd for the line's type; 0 for degenerate pools
// (sd == 0 or fewer than two samples). Throws std::out_of_range when the
// type has no stats.
double zscore(const LineScore& score, const TypeStats& stats);

struct BugWeightRow {
  std::size_t bugs = 0;
  std::size_t lines = 0;
  double weight = 0.0;
};

struct BugWeightTable {
  std::map<LineType, BugWeightRow> rows;
  // Weight for a type that never appeared in the training history.
  double unseen_weight = 0.0;
  std::string training_range;

  double weight_of(LineType type) const;

  // Header `# training=<range>` then `type<TAB>bugs<TAB>lines<TAB>weight` rows.
  void write(std::ostream& out) const;
  static BugWeightTable read(std::istream& in);
};

struct LabeledLine {
  LineType type = LineType::other;
  bool buggy = false;
};

// Relative bug-proneness per type: (bugs/lines) normalized to sum to 1 over
// observed types. Throws std::invalid_argument("no training signal") when no
// line is buggy.
BugWeightTable train_bug_weights(std::span<const LabeledLine> history,
                                 std::string training_range = {});

double weighted_score(double z, const BugWeightTable& weights, LineType type);

// Fills z (per-type pools over `scores` itself) and, when `weights` is
// given, weighted = z * w_type; otherwise weighted = z.
void normalize_scores(std::span<LineScore> scores, const BugWeightTable* weights);

}  // namespace nbf
