#include <algorithm>
#include <set>
#include <stdexcept>

#include "nbf/scorer.hpp"

namespace nbf {

std::vector<SweepRow> sweep_cache_params(std::span<const LabeledSnapshot> corpus,
                                         std::span<const std::size_t> orders,
                                         std::span<const double> weights,
                                         const ScoringOptions& base, std::size_t bin_count) {
  if (orders.empty() || weights.empty())
    throw std::invalid_argument("sweep needs at least one order and one weight");
  if (std::all_of(corpus.begin(), corpus.end(), [](const auto& s) { return s.buggy.empty(); }))
    throw std::invalid_argument("no labeled buggy lines to sweep over");

  std::vector<TrainedBins> trained;
  trained.reserve(corpus.size());
  for (const auto& snap : corpus) {
    std::vector<std::string> paths;
    for (const auto& f : snap.files) paths.push_back(f.path);
    trained.emplace_back(snap.files, partition_bins(paths, bin_count), base.global_order,
                         base.use_epilog, base.jobs);
  }

  std::vector<SweepRow> rows;
  for (const auto order : orders) {
    for (const auto weight : weights) {
      auto options = base;
      options.cache.min_backoff_order = order;
      options.cache.backoff_weight = weight;
      if (options.cache.max_cache_order < order) options.cache.max_cache_order = order;

      SweepRow row;
      row.min_backoff_order = order;
      row.backoff_weight = weight;
      double buggy_sum = 0.0;
      double other_sum = 0.0;
      for (std::size_t s = 0; s < corpus.size(); ++s) {
        const auto scores = score_snapshot(corpus[s].files, options, trained[s]);
        std::set<std::string> buggy_files;
        for (const auto& l : scores)
          if (corpus[s].buggy.count({l.path, l.line})) buggy_files.insert(l.path);
        for (const auto& l : scores) {
          if (!buggy_files.count(l.path)) continue;
          if (corpus[s].buggy.count({l.path, l.line})) {
            buggy_sum += l.entropy;
            ++row.buggy_lines;
          } else {
            other_sum += l.entropy;
            ++row.other_lines;
          }
        }
      }
      if (row.buggy_lines == 0) throw std::invalid_argument("no labeled buggy lines to sweep over");
      row.buggy_mean = buggy_sum / static_cast<double>(row.buggy_lines);
      row.other_mean = row.other_lines ? other_sum / static_cast<double>(row.other_lines) : 0.0;
      row.gap = row.buggy_mean - row.other_mean;
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.gap > b.gap; });
  return rows;
}

}  // namespace nbf
