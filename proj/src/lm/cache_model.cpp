#include "nbf/cache_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace nbf {

void CacheConfig::validate() const {
  if (max_cache_order < 1) throw std::invalid_argument("max_cache_order must be >= 1");
  if (min_backoff_order < 1 || min_backoff_order > max_cache_order)
    throw std::invalid_argument("min_backoff_order must be in [1, max_cache_order]");
  if (!(backoff_weight > 0.0)) throw std::invalid_argument("backoff_weight must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

Cache build_cache(std::span<const std::string> tokens, const CacheConfig& config) {
  config.validate();
  Cache cache{NgramTable(config.max_cache_order), config};
  cache.entries.add_sequence(tokens, /*with_bos=*/false);
  return cache;
}

Cache build_cache(const TokenizedFile& file, const CacheConfig& config, Direction direction) {
  auto texts = file.token_texts();
  if (direction == Direction::backward) std::reverse(texts.begin(), texts.end());
  return build_cache(texts, config);
}

double ngram_prob(const NgramTable& table, std::span<const TokenId> context, TokenId token,
                  double backoff_weight) {
  const auto usable = std::min(context.size(), table.max_order() - 1);
  double penalty = 1.0;
  if (token != kUnknownId) {
    std::vector<TokenId> ngram;
    ngram.reserve(usable + 1);
    for (std::size_t len = usable;; --len) {
      const auto h = context.subspan(context.size() - len);
      const std::uint64_t c_h = len == 0 ? table.total_tokens() : table.count(h);
      if (c_h > 0) {
        ngram.assign(h.begin(), h.end());
        ngram.push_back(token);
        if (const auto c_ht = table.count(std::span<const TokenId>(ngram)); c_ht > 0)
          return std::min(1.0, penalty * static_cast<double>(c_ht) / static_cast<double>(c_h));
      }
      if (len == 0) break;
      penalty *= backoff_weight;
    }
  } else {
    for (std::size_t len = usable; len > 0; --len) penalty *= backoff_weight;
  }
  return std::min(1.0, penalty / static_cast<double>(table.vocab_size() + 1));
}

double ngram_prob(const NgramTable& table, std::span<const std::string> prefix,
                  const std::string& token, const CacheConfig& config) {
  const auto context = table.encode(prefix);
  return ngram_prob(table, context, table.vocabulary().find(token), config.backoff_weight);
}

CacheEstimate cache_estimate(const Cache& cache, std::span<const TokenId> context, TokenId token,
                             bool exclude_self) {
  const auto& cfg = cache.config;
  const auto& entries = cache.entries;
  const auto shortest = cfg.min_backoff_order - 1;
  const auto longest = std::min(context.size(), cfg.max_cache_order - 1);
  if (longest < shortest) return {};
  const double self = exclude_self ? 1.0 : 0.0;

  double penalty = 1.0;
  std::vector<TokenId> ngram;
  for (std::size_t len = longest;; --len) {
    const auto h = context.subspan(context.size() - len);
    const double c_h =
        static_cast<double>(len == 0 ? entries.total_tokens() : entries.count(h)) - self;
    if (c_h > 0.0) {
      ngram.assign(h.begin(), h.end());
      ngram.push_back(token);
      const double c_ht = std::max(
          0.0, static_cast<double>(entries.count(std::span<const TokenId>(ngram))) - self);
      return {c_h, std::min(1.0, penalty * c_ht / c_h), len};
    }
    if (len == shortest) break;
    penalty *= cfg.backoff_weight;
  }
  return {};
}

double interpolate(double p_ngram, double prefix_count, double p_cache, double gamma) {
  if (prefix_count <= 0.0) return p_ngram;
  const double denom = gamma + prefix_count;
  return gamma / denom * p_ngram + prefix_count / denom * p_cache;
}

double cached_prob(const NgramTable& table, const Cache& cache,
                   std::span<const std::string> prefix, const std::string& token,
                   bool exclude_self) {
  const double p_ngram = ngram_prob(table, prefix, token, cache.config);
  const auto local_context = cache.entries.encode(prefix);
  const auto estimate = cache_estimate(cache, local_context,
                                       cache.entries.vocabulary().find(token), exclude_self);
  return interpolate(p_ngram, estimate.prefix_count, estimate.probability, cache.config.gamma);
}

}  // namespace nbf
