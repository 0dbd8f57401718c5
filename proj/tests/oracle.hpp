#pragma once

// Brute-force reference for the language model: every count is a fresh scan
// over raw token lists, no tables, no ids. Conventions mirrored here:
// global files are padded with "<s>", the empty context counts real tokens
// only, caches hold the file without padding, and the self-excluding cache
// query removes one occurrence from both counts.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace nbf::oracle {

using Tokens = std::vector<std::string>;

inline std::size_t windows(const std::vector<Tokens>& seqs, const Tokens& gram) {
  std::size_t n = 0;
  for (const auto& s : seqs) {
    if (gram.size() > s.size()) continue;
    for (std::size_t i = 0; i + gram.size() <= s.size(); ++i)
      if (std::equal(gram.begin(), gram.end(), s.begin() + static_cast<long>(i))) ++n;
  }
  return n;
}

struct Global {
  std::vector<Tokens> padded;
  std::set<std::string> vocab;
  std::size_t total = 0;
  std::size_t order = 3;

  Global(const std::vector<Tokens>& files, std::size_t max_order) : order(max_order) {
    for (const auto& f : files) {
      if (f.empty()) continue;
      Tokens p{"<s>"};
      p.insert(p.end(), f.begin(), f.end());
      padded.push_back(std::move(p));
      vocab.insert(f.begin(), f.end());
      total += f.size();
    }
  }

  double prob(const Tokens& context, const std::string& token, double bw) const {
    const std::size_t usable = std::min(context.size(), order - 1);
    if (vocab.count(token)) {
      for (std::size_t len = usable;; --len) {
        const Tokens h(context.end() - static_cast<long>(len), context.end());
        const double ch = len == 0 ? static_cast<double>(total) : static_cast<double>(windows(padded, h));
        if (ch > 0) {
          Tokens ht = h;
          ht.push_back(token);
          const double cht = static_cast<double>(windows(padded, ht));
          if (cht > 0)
            return std::min(1.0, std::pow(bw, static_cast<double>(usable - len)) * cht / ch);
        }
        if (len == 0) break;
      }
    }
    return std::min(1.0, std::pow(bw, static_cast<double>(usable)) /
                             static_cast<double>(vocab.size() + 1));
  }
};

struct CacheParams {
  std::size_t max_cache_order = 10;
  std::size_t min_backoff_order = 4;
  double backoff_weight = 1.0;
  double gamma = 1.0;
};

// (H, P_cache); H = 0 when no suffix in the window occurs.
inline std::pair<double, double> cache_estimate(const Tokens& file, const Tokens& context,
                                                const std::string& token, const CacheParams& p,
                                                bool exclude_self) {
  const std::vector<Tokens> seqs{file};
  const double self = exclude_self ? 1.0 : 0.0;
  const std::size_t shortest = p.min_backoff_order - 1;
  const std::size_t longest = std::min(context.size(), p.max_cache_order - 1);
  if (longest < shortest) return {0.0, 0.0};
  for (std::size_t len = longest;; --len) {
    const Tokens h(context.end() - static_cast<long>(len), context.end());
    const double ch =
        (len == 0 ? static_cast<double>(file.size()) : static_cast<double>(windows(seqs, h))) - self;
    if (ch > 0) {
      Tokens ht = h;
      ht.push_back(token);
      const double cht = std::max(0.0, static_cast<double>(windows(seqs, ht)) - self);
      return {ch, std::min(1.0, std::pow(p.backoff_weight, static_cast<double>(longest - len)) *
                                    cht / ch)};
    }
    if (len == shortest) break;
  }
  return {0.0, 0.0};
}

inline double mix(double p_ngram, double h, double p_cache, double gamma) {
  if (h <= 0) return p_ngram;
  return gamma / (gamma + h) * p_ngram + h / (gamma + h) * p_cache;
}

// Per-token entropies of `file` scored against `training` files, both
// directions, self-excluded caches.
inline std::vector<double> token_entropies(const Tokens& file, const std::vector<Tokens>& training,
                                           std::size_t order, const CacheParams& p,
                                           bool epilog = true) {
  auto direction = [&](const Tokens& seq, const std::vector<Tokens>& train) {
    const Global g(train, order);
    std::vector<double> probs;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const Tokens prolog(seq.begin(), seq.begin() + static_cast<long>(i));
      Tokens global_ctx{"<s>"};
      global_ctx.insert(global_ctx.end(), prolog.begin(), prolog.end());
      const double pn = g.prob(global_ctx, seq[i], p.backoff_weight);
      const auto [h, pc] = cache_estimate(seq, prolog, seq[i], p, true);
      probs.push_back(mix(pn, h, pc, p.gamma));
    }
    return probs;
  };
  const auto forward = direction(file, training);
  std::vector<double> out(file.size());
  if (!epilog) {
    for (std::size_t i = 0; i < file.size(); ++i) out[i] = -std::log2(forward[i]);
    return out;
  }
  Tokens reversed(file.rbegin(), file.rend());
  std::vector<Tokens> reversed_training;
  for (const auto& t : training) reversed_training.emplace_back(t.rbegin(), t.rend());
  const auto backward = direction(reversed, reversed_training);
  for (std::size_t i = 0; i < file.size(); ++i)
    out[i] = 0.5 * (-std::log2(forward[i]) - std::log2(backward[file.size() - 1 - i]));
  return out;
}

}  // namespace nbf::oracle
