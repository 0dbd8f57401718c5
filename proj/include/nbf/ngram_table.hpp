#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nbf/lexer.hpp"

namespace nbf {

using TokenId = std::uint32_t;

// Reserved id of the begin-of-file sentinel in every vocabulary.
inline constexpr TokenId kBosId = 0;
inline constexpr TokenId kUnknownId = std::numeric_limits<TokenId>::max();
inline constexpr std::string_view kBosText = "<s>";

// Interned token strings. Id 0 is always the begin-of-file sentinel.
class Vocabulary {
 public:
  Vocabulary();

  TokenId intern(std::string_view word);
  // kUnknownId when absent.
  TokenId find(std::string_view word) const;
  const std::string& word(TokenId id) const { return words_[id]; }

  // Number of real tokens (sentinel excluded).
  std::size_t size() const { return words_.size() - 1; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> index_;
};

// Packed id sequence; short n-grams stay in the small-string buffer.
using NgramKey = std::u32string;

enum class Direction { forward, backward };

// Counts of every contiguous token subsequence of length 1..max_order.
//
// Each file is its own sequence. When counting with the sentinel, n-grams
// that start at the begin-of-file position are also counted (the sentinel
// itself gets a unigram count of one per non-empty file) so that the first
// tokens of a file have a context. The sentinel is never part of
// vocab_size() or total_tokens().
class NgramTable {
 public:
  explicit NgramTable(std::size_t max_order = 3);

  // Adds one file's n-grams. Only meant for use while building a table.
  void add_sequence(std::span<const std::string> tokens, bool with_bos = true);

  std::size_t max_order() const { return max_order_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  bool empty() const { return counts_.empty(); }
  std::size_t entry_count() const { return counts_.size(); }

  const Vocabulary& vocabulary() const { return vocab_; }

  // Maps token strings into this table's id space (unknown -> kUnknownId).
  std::vector<TokenId> encode(std::span<const std::string> tokens) const;

  // Count of an n-gram given by token strings; `<s>` names the sentinel.
  std::uint64_t count(std::span<const std::string> ngram) const;
  std::uint64_t count(std::span<const TokenId> ngram) const;
  std::uint64_t count_key(const NgramKey& key) const;

  // Entries as (token strings, count), sorted by length then lexicographically.
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> sorted_entries() const;

  // Text format: a header line, then `count<TAB>tok1 tok2 ...` per n-gram.
  void write(std::ostream& out) const;
  static NgramTable read(std::istream& in);

  // In-place pointwise sum; same contract as merge_tables.
  void absorb(const NgramTable& other);

  friend NgramTable merge_tables(const NgramTable& a, const NgramTable& b);
  friend bool operator==(const NgramTable& a, const NgramTable& b);

 private:
  void add_count(const NgramKey& key, std::uint64_t n);

  std::size_t max_order_;
  Vocabulary vocab_;
  std::unordered_map<NgramKey, std::uint64_t> counts_;
  std::uint64_t total_tokens_ = 0;
};

NgramTable count_ngrams(std::span<const TokenizedFile> files, std::size_t max_order,
                        Direction direction = Direction::forward);

// Pointwise sum. Throws std::invalid_argument when the orders differ.
NgramTable merge_tables(const NgramTable& a, const NgramTable& b);

inline NgramKey make_key(std::span<const TokenId> ids) {
  return NgramKey(reinterpret_cast<const char32_t*>(ids.data()), ids.size());
}

}  // namespace nbf
