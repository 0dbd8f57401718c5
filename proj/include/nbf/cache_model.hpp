#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "nbf/lexer.hpp"
#include "nbf/ngram_table.hpp"

namespace nbf {

struct CacheConfig {
  std::size_t max_cache_order = 10;
  std::size_t min_backoff_order = 4;
  double backoff_weight = 1.0;
  double gamma = 1.0;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Local n-gram counts of one file. Never shared between files.
struct Cache {
  NgramTable entries;
  CacheConfig config;
};

Cache build_cache(const TokenizedFile& file, const CacheConfig& config,
                  Direction direction = Direction::forward);
Cache build_cache(std::span<const std::string> tokens, const CacheConfig& config);

// Global n-gram probability with stupid-backoff-style shortening.
//
// Uses the longest suffix of `context` (at most max_order-1 tokens) after
// which `token` was observed and returns the count ratio c(h t)/c(h) times
// backoff_weight per shortening step. A token never seen at all gets
// 1/(vocab_size+1) times the accumulated penalty. Result is in (0, 1].
double ngram_prob(const NgramTable& table, std::span<const TokenId> context, TokenId token,
                  double backoff_weight);
double ngram_prob(const NgramTable& table, std::span<const std::string> prefix,
                  const std::string& token, const CacheConfig& config);

struct CacheEstimate {
  double prefix_count = 0.0;  // H
  double probability = 0.0;   // P_cache, may be 0 when H > 0
  std::size_t prefix_length = 0;
};

// Longest context suffix h with length in [min_backoff_order-1,
// max_cache_order-1] that occurs in the cache. With `exclude_self` the
// queried occurrence is assumed to be part of the cache and is removed from
// both counts.
CacheEstimate cache_estimate(const Cache& cache, std::span<const TokenId> context, TokenId token,
                             bool exclude_self = false);

// gamma/(gamma+H) * p_ngram + H/(gamma+H) * p_cache; exactly p_ngram at H = 0.
double interpolate(double p_ngram, double prefix_count, double p_cache, double gamma);

double cached_prob(const NgramTable& table, const Cache& cache,
                   std::span<const std::string> prefix, const std::string& token,
                   bool exclude_self = false);

}  // namespace nbf
