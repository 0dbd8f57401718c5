#include "nbf/ngram_table.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nbf {

namespace {

std::string escape_token(const std::string& token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_token(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i == text.size()) throw std::runtime_error("dangling escape in n-gram token");
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case 's': out += ' '; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw std::runtime_error("unknown escape in n-gram token");
    }
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
  if (s.empty()) throw std::runtime_error(std::string("missing ") + what);
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::runtime_error(std::string("bad ") + what + ": " + std::string(s));
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

NgramTable::NgramTable(std::size_t max_order) : max_order_(max_order) {
  if (max_order == 0) throw std::invalid_argument("max_order must be at least 1");
}

void NgramTable::add_count(const NgramKey& key, std::uint64_t n) { counts_[key] += n; }

void NgramTable::add_sequence(std::span<const std::string> tokens, bool with_bos) {
  if (tokens.empty()) return;
  std::vector<TokenId> ids;
  ids.reserve(tokens.size() + 1);
  if (with_bos) ids.push_back(kBosId);
  for (const auto& t : tokens) ids.push_back(vocab_.intern(t));
  total_tokens_ += tokens.size();

  for (std::size_t start = 0; start < ids.size(); ++start) {
    const auto longest = std::min(max_order_, ids.size() - start);
    NgramKey key;
    key.reserve(longest);
    for (std::size_t n = 0; n < longest; ++n) {
      key.push_back(static_cast<char32_t>(ids[start + n]));
      add_count(key, 1);
    }
  }
}

std::vector<TokenId> NgramTable::encode(std::span<const std::string> tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab_.find(t));
  return ids;
}

std::uint64_t NgramTable::count_key(const NgramKey& key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t NgramTable::count(std::span<const TokenId> ngram) const {
  if (ngram.empty() || ngram.size() > max_order_) return 0;
  for (auto id : ngram)
    if (id == kUnknownId) return 0;
  return count_key(make_key(ngram));
}

std::uint64_t NgramTable::count(std::span<const std::string> ngram) const {
  return count(std::span<const TokenId>(encode(ngram)));
}

std::vector<std::pair<std::vector<std::string>, std::uint64_t>> NgramTable::sorted_entries() const {
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> out;
  out.reserve(counts_.size());
  for (const auto& [key, n] : counts_) {
    std::vector<std::string> words;
    words.reserve(key.size());
    for (char32_t id : key) words.push_back(vocab_.word(static_cast<TokenId>(id)));
    out.emplace_back(std::move(words), n);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return out;
}

void NgramTable::write(std::ostream& out) const {
  out << "#ngrams\tmax_order=" << max_order_ << "\tvocab_size=" << vocab_size()
      << "\ttotal_tokens=" << total_tokens_ << '\n';
  for (const auto& [words, n] : sorted_entries()) {
    out << n << '\t';
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out << ' ';
      out << escape_token(words[i]);
    }
    out << '\n';
  }
}

NgramTable NgramTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty n-gram table stream");
  std::istringstream header(line);
  std::string tag, order_field, vocab_field, total_field;
  std::getline(header, tag, '\t');
  std::getline(header, order_field, '\t');
  std::getline(header, vocab_field, '\t');
  std::getline(header, total_field, '\t');
  auto value_of = [](const std::string& field, std::string_view name) {
    if (field.rfind(std::string(name) + "=", 0) != 0)
      throw std::runtime_error("malformed n-gram table header field: " + field);
    return std::string_view(field).substr(name.size() + 1);
  };
  if (tag != "#ngrams") throw std::runtime_error("not an n-gram table");
  NgramTable table(parse_u64(value_of(order_field, "max_order"), "max_order"));
  const auto vocab = parse_u64(value_of(vocab_field, "vocab_size"), "vocab_size");
  const auto total = parse_u64(value_of(total_field, "total_tokens"), "total_tokens");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("n-gram table line " + std::to_string(line_no) + ": missing tab");
    const auto n = parse_u64(std::string_view(line).substr(0, tab), "count");
    NgramKey key;
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (true) {
      const auto space = rest.find(' ');
      key.push_back(static_cast<char32_t>(table.vocab_.intern(unescape_token(rest.substr(0, space)))));
      if (space == std::string_view::npos) break;
      rest.remove_prefix(space + 1);
    }
    if (key.size() > table.max_order_)
      throw std::runtime_error("n-gram table line " + std::to_string(line_no) + ": n-gram longer than max_order");
    table.add_count(key, n);
  }
  table.total_tokens_ = total;
  if (table.vocab_size() != vocab)
    throw std::runtime_error("n-gram table header vocab_size does not match its unigrams");
  return table;
}

NgramTable count_ngrams(std::span<const TokenizedFile> files, std::size_t max_order,
                        Direction direction) {
  NgramTable table(max_order);
  for (const auto& file : files) {
    auto texts = file.token_texts();
    if (direction == Direction::backward) std::reverse(texts.begin(), texts.end());
    table.add_sequence(texts);
  }
  return table;
}

void NgramTable::absorb(const NgramTable& other) {
  if (max_order_ != other.max_order_)
    throw std::invalid_argument("cannot merge n-gram tables of different orders");
  std::vector<TokenId> remap(other.vocab_.size() + 1);
  for (TokenId id = 0; id < remap.size(); ++id) remap[id] = vocab_.intern(other.vocab_.word(id));
  counts_.reserve(counts_.size() + other.counts_.size());
  for (const auto& [key, n] : other.counts_) {
    NgramKey mapped;
    mapped.reserve(key.size());
    for (char32_t id : key) mapped.push_back(static_cast<char32_t>(remap[id]));
    add_count(mapped, n);
  }
  total_tokens_ += other.total_tokens_;
}

NgramTable merge_tables(const NgramTable& a, const NgramTable& b) {
  NgramTable out = a;
  out.absorb(b);
  return out;
}

bool operator==(const NgramTable& a, const NgramTable& b) {
  return a.max_order_ == b.max_order_ && a.total_tokens_ == b.total_tokens_ &&
         a.vocab_size() == b.vocab_size() && a.sorted_entries() == b.sorted_entries();
}

}  // namespace nbf
