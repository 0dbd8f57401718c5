#include "nbf/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "nbf/parallel.hpp"

namespace nbf {

std::uint64_t stable_path_hash(std::string_view path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : path) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t BinAssignment::bin_of(const std::string& path) const {
  const auto it = assignment.find(path);
  if (it != assignment.end()) return it->second;
  return static_cast<std::size_t>(stable_path_hash(path) % bin_count);
}

BinAssignment partition_bins(std::span<const std::string> paths, std::size_t bin_count) {
  if (bin_count < 2) throw std::invalid_argument("bin_count must be at least 2");
  BinAssignment bins;
  bins.bin_count = bin_count;
  for (const auto& p : paths)
    bins.assignment[p] = static_cast<std::size_t>(stable_path_hash(p) % bin_count);
  return bins;
}

void ScoringOptions::validate() const {
  cache.validate();
  if (global_order < 1) throw std::invalid_argument("global n-gram order must be >= 1");
}

double token_entropy(double p_forward, double p_backward) {
  const double forward = -std::log2(p_forward);
  if (p_backward < 0.0) return std::max(0.0, forward);
  return std::max(0.0, 0.5 * (forward - std::log2(p_backward)));
}

double token_entropy(const NgramTable& forward_table, const Cache& forward_cache,
                     const NgramTable& backward_table, const Cache& backward_cache,
                     std::span<const std::string> prolog, std::span<const std::string> epilog,
                     const std::string& token, bool exclude_self) {
  auto query = [&](const NgramTable& table, const Cache& cache,
                   const std::vector<std::string>& context) {
    std::vector<std::string> global_context;
    global_context.reserve(context.size() + 1);
    global_context.emplace_back(kBosText);
    global_context.insert(global_context.end(), context.begin(), context.end());
    const double p_ngram = ngram_prob(table, global_context, token, cache.config);
    const auto local = cache.entries.encode(context);
    const auto est = cache_estimate(cache, local, cache.entries.vocabulary().find(token),
                                    exclude_self);
    return interpolate(p_ngram, est.prefix_count, est.probability, cache.config.gamma);
  };
  const std::vector<std::string> forward_context(prolog.begin(), prolog.end());
  const std::vector<std::string> backward_context(epilog.rbegin(), epilog.rend());
  return token_entropy(query(forward_table, forward_cache, forward_context),
                       query(backward_table, backward_cache, backward_context));
}

double line_entropy(std::span<const double> token_entropies) {
  if (token_entropies.empty()) throw std::invalid_argument("no tokens");
  double sum = 0.0;
  for (double e : token_entropies) sum += e;
  return sum / static_cast<double>(token_entropies.size());
}

namespace {

// Probability of every token of `texts` (already in scoring direction)
// under the global table and the sequence's own cache.
std::vector<double> directional_probs(const std::vector<std::string>& texts,
                                      const NgramTable& table, const ScoringOptions& options) {
  const auto cache = build_cache(texts, options.cache);
  std::vector<TokenId> global_ids;
  global_ids.reserve(texts.size() + 1);
  global_ids.push_back(kBosId);
  for (const auto& t : texts) global_ids.push_back(table.vocabulary().find(t));
  const auto local_ids = cache.entries.encode(texts);

  std::vector<double> probs(texts.size());
  const std::span<const TokenId> global(global_ids);
  const std::span<const TokenId> local(local_ids);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const double p_ngram = ngram_prob(table, global.first(i + 1), global[i + 1],
                                      options.cache.backoff_weight);
    const auto est = cache_estimate(cache, local.first(i), local[i], /*exclude_self=*/true);
    probs[i] = interpolate(p_ngram, est.prefix_count, est.probability, options.cache.gamma);
  }
  return probs;
}

}  // namespace

std::vector<double> score_file_tokens(const TokenizedFile& file, const NgramTable& forward_table,
                                      const NgramTable& backward_table,
                                      const ScoringOptions& options) {
  auto texts = file.token_texts();
  const auto forward = directional_probs(texts, forward_table, options);
  std::vector<double> out(texts.size());
  if (!options.use_epilog) {
    for (std::size_t i = 0; i < texts.size(); ++i) out[i] = token_entropy(forward[i], -1.0);
    return out;
  }
  std::reverse(texts.begin(), texts.end());
  const auto backward = directional_probs(texts, backward_table, options);
  const auto n = texts.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = token_entropy(forward[i], backward[n - 1 - i]);
  return out;
}

std::vector<LineScore> score_file(const TokenizedFile& file, const NgramTable& forward_table,
                                  const NgramTable& backward_table, const ScoringOptions& options) {
  const auto entropies = score_file_tokens(file, forward_table, backward_table, options);
  std::vector<LineScore> lines;
  std::size_t i = 0;
  while (i < file.tokens.size()) {
    const auto line = file.tokens[i].line;
    std::size_t j = i;
    while (j < file.tokens.size() && file.tokens[j].line == line) ++j;
    LineScore score;
    score.path = file.path;
    score.line = line;
    score.token_count = j - i;
    score.entropy = line_entropy(std::span<const double>(entropies).subspan(i, j - i));
    const auto type = file.line_types.find(line);
    score.line_type = type != file.line_types.end() ? type->second : classify_line_type(file, line);
    lines.push_back(std::move(score));
    i = j;
  }
  return lines;
}

TrainedBins::TrainedBins(std::span<const TokenizedFile> snapshot, const BinAssignment& bins,
                         std::size_t global_order, bool with_backward, std::size_t jobs)
    : bins_(bins) {
  const auto bin_count = bins.bin_count;
  if (bin_count < 2) throw std::invalid_argument("bin_count must be at least 2");

  std::vector<std::vector<const TokenizedFile*>> members(bin_count);
  for (const auto& f : snapshot) members[bins.bin_of(f.path)].push_back(&f);

  std::vector<NgramTable> forward_bins(bin_count, NgramTable(global_order));
  std::vector<NgramTable> backward_bins(bin_count, NgramTable(global_order));
  parallel_for(bin_count, jobs, [&](std::size_t b) {
    for (const auto* f : members[b]) {
      auto texts = f->token_texts();
      forward_bins[b].add_sequence(texts);
      if (!with_backward) continue;
      std::reverse(texts.begin(), texts.end());
      backward_bins[b].add_sequence(texts);
    }
  });

  forward_.assign(bin_count, NgramTable(global_order));
  backward_.assign(bin_count, NgramTable(global_order));
  parallel_for(bin_count, jobs, [&](std::size_t b) {
    if (members[b].empty()) return;
    for (std::size_t other = 0; other < bin_count; ++other) {
      if (other == b) continue;
      forward_[b].absorb(forward_bins[other]);
      if (with_backward) backward_[b].absorb(backward_bins[other]);
    }
  });
}

const NgramTable& TrainedBins::forward_for(const std::string& path) const {
  return forward_[bins_.bin_of(path)];
}

const NgramTable& TrainedBins::backward_for(const std::string& path) const {
  return backward_[bins_.bin_of(path)];
}

std::vector<LineScore> score_snapshot(std::span<const TokenizedFile> snapshot,
                                      const ScoringOptions& options, const TrainedBins& trained) {
  options.validate();
  std::vector<std::vector<LineScore>> per_file(snapshot.size());
  parallel_for(snapshot.size(), options.jobs, [&](std::size_t i) {
    const auto& path = snapshot[i].path;
    per_file[i] =
        score_file(snapshot[i], trained.forward_for(path), trained.backward_for(path), options);
  });

  std::vector<LineScore> out;
  for (auto& lines : per_file)
    for (auto& l : lines) out.push_back(std::move(l));
  std::sort(out.begin(), out.end(), [](const LineScore& a, const LineScore& b) {
    return std::tie(a.path, a.line) < std::tie(b.path, b.line);
  });
  return out;
}

std::vector<LineScore> score_snapshot(std::span<const TokenizedFile> snapshot,
                                      const ScoringOptions& options, const BinAssignment& bins) {
  options.validate();
  const TrainedBins trained(snapshot, bins, options.global_order, options.use_epilog,
                            options.jobs);
  return score_snapshot(snapshot, options, trained);
}

}  // namespace nbf
