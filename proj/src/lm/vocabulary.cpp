#include "nbf/ngram_table.hpp"

namespace nbf {

Vocabulary::Vocabulary() {
  words_.emplace_back(kBosText);
  index_.emplace(std::string(kBosText), kBosId);
}

TokenId Vocabulary::intern(std::string_view word) {
  auto [it, inserted] = index_.try_emplace(std::string(word), static_cast<TokenId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

TokenId Vocabulary::find(std::string_view word) const {
  // Heterogeneous lookup on unordered_map needs C++20 library support that
  // GCC 11 lacks, hence the temporary string.
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnknownId : it->second;
}

}  // namespace nbf
