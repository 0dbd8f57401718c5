#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbf/scorer.hpp"

namespace nbf {

using LineKey = std::pair<std::string, std::size_t>;
using BugMap = std::map<std::string, std::set<LineKey>>;

struct Warning {
  std::string tool;
  std::string path;
  std::size_t start_line = 0;
  std::size_t end_line = 0;
  int priority = 0;

  // Throws std::invalid_argument on an empty range or non-positive priority.
  void validate() const;
};

enum class CreditMode { full, partial };

std::string_view to_string(CreditMode mode);
std::optional<CreditMode> parse_credit_mode(std::string_view name);

struct EvalCurve {
  // (fraction of lines inspected, fraction of bug credit earned), one point
  // per inspected line after the (0, 0) origin.
  std::vector<std::pair<double, double>> points;
};

// Lift curve of an ordering over the whole population. Every bug is worth
// one point; under full credit it is earned at the first inspected line,
// under partial credit each line earns 1/|bug|. Throws on an empty
// population or a bug line outside it. With no bugs the curve is flat at 0.
EvalCurve lift_curve(std::span<const LineKey> ordering, const BugMap& bugs, CreditMode credit);

// Trapezoidal area from 0 to `budget`, interpolating linearly at the
// budget. Throws std::invalid_argument unless budget is in (0, 1].
double aucec(const EvalCurve& curve, double budget);

// Line value: highest priority among covering warnings (0 if none) plus a
// U[0,1) tie-breaker from mt19937_64(seed), drawn in (path, line) order;
// sorted by value descending. Warned lines outside the population are
// ignored.
std::vector<LineKey> simulate_sbf_order(std::span<const Warning> warnings,
                                        std::span<const LineKey> population, std::uint64_t seed);

// Ranks by a LineScore field, descending, ties by (path, line).
enum class RankKey { entropy, z, weighted };
std::string_view to_string(RankKey key);
std::optional<RankKey> parse_rank_key(std::string_view name);
std::vector<LineKey> rank_lines(std::span<const LineScore> scores, RankKey key = RankKey::weighted);

// Priority buckets descending (unwarned lines last), each ordered by
// `key` descending, ties by (path, line). Throws when a warning covers no
// scored line.
std::vector<LineKey> mix_order(std::span<const Warning> warnings, std::span<const LineScore> scores,
                               RankKey key = RankKey::weighted);

// Distinct population lines covered by at least one warning.
std::size_t warned_line_count(std::span<const Warning> warnings,
                              std::span<const LineKey> population);

struct AucecPair {
  double sbf = 0.0;
  double nbf = 0.0;
  double budget = 0.0;
};

// Both orderings scored at budget warned_lines / population size.
AucecPair aucecl(std::span<const LineKey> sbf_ordering, std::span<const LineKey> nbf_ordering,
                 std::size_t warned_lines, const BugMap& bugs, CreditMode credit);

struct MonteCarloResult {
  double mean = 0.0;
  double sd = 0.0;  // sample SD over runs
  std::size_t runs = 0;
};

inline constexpr std::size_t kDefaultMonteCarloRuns = 100;

// Per-run seeds for a master seed (splitmix64 stream).
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t runs);

// AUCEC of simulated SBF orderings over `runs` derived seeds.
MonteCarloResult simulate_sbf_aucec(std::span<const Warning> warnings,
                                    std::span<const LineKey> population, const BugMap& bugs,
                                    CreditMode credit, double budget, std::size_t runs,
                                    std::uint64_t master_seed, std::size_t jobs = 1);

// Drops bugs of max_bug_lines or more lines (0 disables), then drops bug
// lines outside the population, then bugs left empty.
BugMap filter_bugs(const BugMap& bugs, std::span<const LineKey> population,
                   std::size_t max_bug_lines);

struct DistributionComparison {
  double mean_diff = 0.0;  // buggy - other
  double ci_low = 0.0;
  double ci_high = 0.0;
  double cohens_d = 0.0;
};

// Mean difference, percentile bootstrap 95% CI and Cohen's d with the
// pooled (n-1) SD. Throws std::invalid_argument for a sample smaller than
// two, a degenerate pooled SD, or zero bootstrap samples.
DistributionComparison compare_entropy_distributions(std::span<const double> buggy,
                                                     std::span<const double> other,
                                                     std::size_t bootstrap_samples,
                                                     std::uint64_t seed);

}  // namespace nbf
