#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nbf/cache_model.hpp"
#include "nbf/lexer.hpp"
#include "nbf/ngram_table.hpp"

namespace nbf {

struct LineScore {
  std::string path;
  std::size_t line = 0;
  double entropy = 0.0;  // bits, mean over the line's tokens
  std::size_t token_count = 0;
  LineType line_type = LineType::other;
  double z = 0.0;
  double weighted = 0.0;
};

struct BinAssignment {
  std::size_t bin_count = 10;
  std::map<std::string, std::size_t> assignment;

  std::size_t bin_of(const std::string& path) const;
};

// 64-bit FNV-1a of the path bytes.
std::uint64_t stable_path_hash(std::string_view path);

// Throws std::invalid_argument when bin_count < 2.
BinAssignment partition_bins(std::span<const std::string> paths, std::size_t bin_count);

struct ScoringOptions {
  CacheConfig cache;
  std::size_t global_order = 3;
  // Off: tokens are scored from the prolog only.
  bool use_epilog = true;
  std::size_t jobs = 1;

  void validate() const;
};

// Mean of forward and backward surprisal in bits; forward only when p_backward < 0.
double token_entropy(double p_forward, double p_backward);

// Full query form. `prolog` is every token before the scored one and
// `epilog` every token after it, both in file order; each is a complete
// file boundary, so the begin-of-file sentinel is prepended to the global
// context. Caches are the file's own forward/backward caches; with
// `exclude_self` the scored occurrence is removed from their counts.
double token_entropy(const NgramTable& forward_table, const Cache& forward_cache,
                     const NgramTable& backward_table, const Cache& backward_cache,
                     std::span<const std::string> prolog, std::span<const std::string> epilog,
                     const std::string& token, bool exclude_self = true);

// Throws std::invalid_argument("no tokens") for an empty line.
double line_entropy(std::span<const double> token_entropies);

// Per-token entropies of one file under the given leave-out tables. The
// scored occurrence is removed from the file's own cache counts.
std::vector<double> score_file_tokens(const TokenizedFile& file, const NgramTable& forward_table,
                                      const NgramTable& backward_table,
                                      const ScoringOptions& options);

// Lines of one file, in line order.
std::vector<LineScore> score_file(const TokenizedFile& file, const NgramTable& forward_table,
                                  const NgramTable& backward_table, const ScoringOptions& options);

// Leave-one-bin-out training tables: for bin b, the counts of every file
// outside b (forward and, optionally, reversed).
class TrainedBins {
 public:
  TrainedBins(std::span<const TokenizedFile> snapshot, const BinAssignment& bins,
              std::size_t global_order, bool with_backward, std::size_t jobs);

  const NgramTable& forward_for(const std::string& path) const;
  const NgramTable& backward_for(const std::string& path) const;
  const BinAssignment& bins() const { return bins_; }

 private:
  BinAssignment bins_;
  std::vector<NgramTable> forward_;
  std::vector<NgramTable> backward_;
};

// Leave-one-bin-out scoring of every token-bearing line; sorted by (path, line).
std::vector<LineScore> score_snapshot(std::span<const TokenizedFile> snapshot,
                                      const ScoringOptions& options, const BinAssignment& bins);
std::vector<LineScore> score_snapshot(std::span<const TokenizedFile> snapshot,
                                      const ScoringOptions& options, const TrainedBins& trained);

// A scored snapshot plus its buggy line labels.
struct LabeledSnapshot {
  std::vector<TokenizedFile> files;
  std::set<std::pair<std::string, std::size_t>> buggy;
};

struct SweepRow {
  std::size_t min_backoff_order = 0;
  double backoff_weight = 0.0;
  double buggy_mean = 0.0;
  double other_mean = 0.0;
  double gap = 0.0;
  std::size_t buggy_lines = 0;
  std::size_t other_lines = 0;
};

// Mean entropy gap (buggy minus non-buggy lines of the same files) for every
// (order, weight) pair, sorted by gap descending. Throws when the corpus has
// no buggy line that carries tokens.
std::vector<SweepRow> sweep_cache_params(std::span<const LabeledSnapshot> corpus,
                                         std::span<const std::size_t> orders,
                                         std::span<const double> weights,
                                         const ScoringOptions& base, std::size_t bin_count);

}  // namespace nbf
