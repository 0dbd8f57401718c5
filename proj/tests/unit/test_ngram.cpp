#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "nbf/cache_model.hpp"
#include "nbf/ngram_table.hpp"
#include "support.hpp"

namespace nbf {
namespace {

using Tokens = std::vector<std::string>;
using Counts = std::map<Tokens, std::uint64_t>;

NgramTable table_of(const std::vector<Tokens>& files, std::size_t order) {
  NgramTable t(order);
  for (const auto& f : files) t.add_sequence(f);
  return t;
}

// Independent recount: every window of every BOS-padded file.
Counts brute_counts(const std::vector<Tokens>& files, std::size_t order) {
  Counts counts;
  for (const auto& f : files) {
    if (f.empty()) continue;
    Tokens padded{"<s>"};
    padded.insert(padded.end(), f.begin(), f.end());
    for (std::size_t i = 0; i < padded.size(); ++i)
      for (std::size_t n = 1; n <= order && i + n <= padded.size(); ++n)
        ++counts[Tokens(padded.begin() + i, padded.begin() + i + n)];
  }
  return counts;
}

Counts entries_of(const NgramTable& t) {
  Counts out;
  for (auto& [k, v] : t.sorted_entries()) out[k] = v;
  return out;
}

std::vector<Tokens> random_corpus(std::mt19937_64& rng, std::size_t files, std::size_t max_len,
                                  std::size_t alphabet) {
  std::vector<Tokens> corpus(files);
  for (auto& f : corpus) {
    const auto len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) f.push_back(std::string(1, char('a' + rng() % alphabet)));
  }
  return corpus;
}

const Tokens kAbab{"a", "b", "a", "b"};

TEST(NgramTable, CountsOfAbab) {
  const auto t = table_of({kAbab}, 2);
  EXPECT_EQ(t.count(Tokens{"a"}), 2u);
  EXPECT_EQ(t.count(Tokens{"b"}), 2u);
  EXPECT_EQ(t.count(Tokens{"a", "b"}), 2u);
  EXPECT_EQ(t.count(Tokens{"b", "a"}), 1u);
  EXPECT_EQ(t.count(Tokens{"<s>", "a"}), 1u);
  EXPECT_EQ(t.count(Tokens{"a", "a"}), 0u);
  EXPECT_EQ(t.total_tokens(), 4u);
  EXPECT_EQ(t.vocab_size(), 2u);
}

TEST(NgramTable, EmptyCorpus) {
  const auto t = count_ngrams(std::span<const TokenizedFile>{}, 3);
  EXPECT_EQ(t.total_tokens(), 0u);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.vocab_size(), 0u);
}

TEST(NgramTable, CountNgramsFromTokenizedFiles) {
  const auto f = testing::lex_java("a = b;\nb = a;\n", "A.java");
  const auto forward = count_ngrams(std::span(&f, 1), 2);
  EXPECT_EQ(forward.count(Tokens{"<s>", "a"}), 1u);
  EXPECT_EQ(forward.count(Tokens{";", "b"}), 1u);
  const auto backward = count_ngrams(std::span(&f, 1), 2, Direction::backward);
  EXPECT_EQ(backward.count(Tokens{"<s>", ";"}), 1u);
  EXPECT_EQ(backward.count(Tokens{"b", ";"}), 1u);
  EXPECT_EQ(backward.count(Tokens{"=", "a"}), 1u);
}

TEST(NgramTable, SeparateCorporaMergeToCombined) {
  const Tokens x{"p", "q", "p"}, y{"q", "q", "r"};
  EXPECT_EQ(merge_tables(table_of({x}, 3), table_of({y}, 3)), table_of({x, y}, 3));
}

TEST(NgramTable, MergeWithEmptyIsIdentity) {
  const auto t = table_of({kAbab, {"c", "a"}}, 3);
  EXPECT_EQ(merge_tables(t, NgramTable(3)), t);
  EXPECT_EQ(merge_tables(NgramTable(3), t), t);
}

TEST(NgramTable, MergeOrderMismatchThrows) {
  EXPECT_THROW(merge_tables(NgramTable(2), NgramTable(3)), std::invalid_argument);
}

TEST(NgramTableProperty, MergeIsCommutativeAndMatchesRecount) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_corpus(rng, 3, 12, 4);
    const auto b = random_corpus(rng, 3, 12, 5);
    const auto ta = table_of(a, 3), tb = table_of(b, 3);
    const auto ab = merge_tables(ta, tb);
    EXPECT_EQ(ab, merge_tables(tb, ta));
    auto all = a;
    all.insert(all.end(), b.begin(), b.end());
    EXPECT_EQ(entries_of(ab), brute_counts(all, 3));
    std::set<std::string> vocab;
    for (const auto& f : all) vocab.insert(f.begin(), f.end());
    EXPECT_EQ(ab.vocab_size(), vocab.size());
    std::uint64_t total = 0;
    for (const auto& f : all) total += f.size();
    EXPECT_EQ(ab.total_tokens(), total);
  }
}

TEST(NgramTableProperty, PrefixClosureAndUnigramTotal) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = table_of(random_corpus(rng, 4, 20, 6), 4);
    const auto entries = entries_of(t);
    std::uint64_t unigram_sum = 0;
    for (const auto& [k, n] : entries) {
      if (k.size() == 1 && k[0] != "<s>") unigram_sum += n;
      if (k.size() < 2) continue;
      const Tokens prefix(k.begin(), k.end() - 1);
      ASSERT_TRUE(entries.count(prefix));
      EXPECT_GE(entries.at(prefix), n);
    }
    EXPECT_EQ(unigram_sum, t.total_tokens());
  }
}

TEST(NgramTable, SerializationRoundTrip) {
  std::mt19937_64 rng(3);
  auto corpus = random_corpus(rng, 5, 30, 7);
  corpus.push_back({"\"a b\"", "x\\y", "tab\there"});
  const auto t = table_of(corpus, 3);
  std::stringstream buf;
  t.write(buf);
  const auto text = buf.str();
  const auto back = NgramTable::read(buf);
  EXPECT_EQ(back, t);
  std::stringstream again;
  back.write(again);
  EXPECT_EQ(again.str(), text);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "#ngrams\tmax_order=3\tvocab_size=" + std::to_string(t.vocab_size()) +
                "\ttotal_tokens=" + std::to_string(t.total_tokens()));
}

TEST(NgramTable, ReadRejectsGarbage) {
  std::istringstream empty("");
  EXPECT_THROW(NgramTable::read(empty), std::runtime_error);
  std::istringstream bad("#ngrams\tmax_order=2\tvocab_size=1\ttotal_tokens=1\nnotab\n");
  EXPECT_THROW(NgramTable::read(bad), std::runtime_error);
  std::istringstream wrong_vocab("#ngrams\tmax_order=2\tvocab_size=3\ttotal_tokens=1\n1\ta\n");
  EXPECT_THROW(NgramTable::read(wrong_vocab), std::runtime_error);
}

TEST(NgramProb, SpecExamples) {
  const auto t = table_of({kAbab}, 2);
  const CacheConfig cfg;
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"a"}, "b", cfg), 1.0);
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"b"}, "a", cfg), 0.5);
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"a"}, "zzz", cfg), 1.0 / 3.0);
}

TEST(NgramProb, OovFloorCarriesBackoffPenalty) {
  const auto t = table_of({kAbab}, 3);
  CacheConfig cfg;
  cfg.backoff_weight = 0.5;
  // Two usable context tokens: two shortenings before the floor.
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"a", "b"}, "zzz", cfg), 0.25 / 3.0);
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{}, "zzz", cfg), 1.0 / 3.0);
}

TEST(NgramProb, BackoffToShorterContext) {
  // c(x b) = 0 so [x, a] -> [a]: one step, then c(a b)/c(a).
  const auto t = table_of({{"a", "b", "x", "a", "c"}}, 3);
  CacheConfig cfg;
  cfg.backoff_weight = 0.4;
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"c", "a"}, "b", cfg), 0.4 * 0.5);
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"x", "a"}, "c", cfg), 1.0);
  // Unknown context tokens are skipped by backoff, never an error.
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"q", "r"}, "a", cfg), 0.4 * 0.4 * 2.0 / 5.0);
}

TEST(NgramProb, BeginOfFileContext) {
  const auto t = table_of({{"a", "b"}, {"a", "c"}, {"b", "a"}}, 2);
  const CacheConfig cfg;
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"<s>"}, "a", cfg), 2.0 / 3.0);
}

TEST(NgramProb, EmptyTableGivesFloor) {
  const NgramTable t(3);
  const CacheConfig cfg;
  EXPECT_DOUBLE_EQ(ngram_prob(t, Tokens{"a"}, "b", cfg), 1.0);
}

TEST(NgramProbProperty, ValidProbabilityAndObservedMass) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto corpus = random_corpus(rng, 3, 25, 5);
    const auto t = table_of(corpus, 3);
    CacheConfig cfg;
    cfg.backoff_weight = (trial % 2) ? 1.0 : 0.3;
    std::vector<std::string> vocab;
    for (char c = 'a'; c < 'a' + 5; ++c) vocab.emplace_back(1, c);
    for (int q = 0; q < 20; ++q) {
      Tokens prefix;
      for (std::size_t i = rng() % 3; i > 0; --i) prefix.push_back(vocab[rng() % vocab.size()]);
      for (const auto& w : vocab) {
        const double p = ngram_prob(t, prefix, w, cfg);
        EXPECT_GT(p, 0.0);
        EXPECT_LE(p, 1.0);
      }
      // Continuations seen after the full context form a distribution.
      const Tokens h(prefix.end() - std::min<std::size_t>(prefix.size(), 2), prefix.end());
      if (h.empty() || t.count(h) == 0) continue;
      double mass = 0.0;
      for (const auto& w : vocab) {
        Tokens ht = h;
        ht.push_back(w);
        if (t.count(ht) > 0) mass += ngram_prob(t, h, w, cfg);
      }
      EXPECT_LE(mass, 1.0 + 1e-9);
    }
  }
}

// With the full context and continuation observed, the probability is the
// exact count ratio of a brute-force recount.
TEST(NgramProbProperty, CountRatioOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto corpus = random_corpus(rng, 4, 30, 4);
    const auto counts = brute_counts(corpus, 3);
    const auto t = table_of(corpus, 3);
    const CacheConfig cfg;
    for (const auto& [k, n] : counts) {
      if (k.size() != 3 || k[2] == "<s>") continue;
      const Tokens h(k.begin(), k.end() - 1);
      EXPECT_DOUBLE_EQ(ngram_prob(t, h, k[2], cfg),
                       static_cast<double>(n) / static_cast<double>(counts.at(h)));
    }
  }
}

}  // namespace
}  // namespace nbf
