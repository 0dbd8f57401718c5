#include "nbf/lexer.hpp"

#include <algorithm>
#include <stdexcept>

namespace nbf {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::literal: return "literal";
    case TokenKind::op: return "operator";
    case TokenKind::punctuation: return "punctuation";
  }
  return "identifier";
}

std::string Diagnostic::to_string() const {
  return (path.empty() ? std::string("<input>") : path) + ":" + std::to_string(line) + ": " +
         message;
}

std::span<const Token> TokenizedFile::tokens_on_line(std::size_t line) const {
  const auto lo = std::partition_point(tokens.begin(), tokens.end(),
                                       [&](const Token& t) { return t.line < line; });
  const auto hi =
      std::partition_point(lo, tokens.end(), [&](const Token& t) { return t.line == line; });
  return {lo, hi};
}

std::vector<std::string> TokenizedFile::token_texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

class Scanner {
 public:
  Scanner(std::string_view src, const LanguageProfile& profile, TokenizedFile& out)
      : src_(src), profile_(profile), out_(out) {}

  void run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else if (starts_line_comment()) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (const auto* block = block_comment_at()) {
        if (!skip_block_comment(*block)) return;
      } else if (profile_.string_quotes.find(c) != std::string::npos ||
                 profile_.char_quotes.find(c) != std::string::npos) {
        if (!scan_quoted(c)) return;
      } else if (is_digit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        scan_number();
      } else if (is_ident_start(static_cast<unsigned char>(c))) {
        scan_word();
      } else {
        scan_symbol();
      }
    }
  }

 private:
  bool at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  bool starts_line_comment() const {
    return std::any_of(profile_.line_comments.begin(), profile_.line_comments.end(),
                       [&](const std::string& p) { return at(p); });
  }

  const std::pair<std::string, std::string>* block_comment_at() const {
    for (const auto& block : profile_.block_comments)
      if (at(block.first)) return &block;
    return nullptr;
  }

  void emit(std::size_t begin, TokenKind kind) {
    out_.tokens.push_back(Token{std::string(src_.substr(begin, pos_ - begin)), line_, kind});
  }

  void fail(std::size_t line, std::string message) {
    out_.diagnostics.push_back(Diagnostic{out_.path, line, std::move(message)});
  }

  bool skip_block_comment(const std::pair<std::string, std::string>& block) {
    const auto start_line = line_;
    const auto close = src_.find(block.second, pos_ + block.first.size());
    if (close == std::string_view::npos) {
      fail(start_line, "unterminated comment");
      return false;
    }
    const auto end = close + block.second.size();
    line_ += static_cast<std::size_t>(std::count(src_.begin() + pos_, src_.begin() + end, '\n'));
    pos_ = end;
    return true;
  }

  // Literals never span lines, so a newline before the closing quote is
  // reported the same way as end of input.
  bool scan_quoted(char quote) {
    const auto begin = pos_++;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') break;
      if (c == profile_.escape && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') {
        pos_ += 2;
        continue;
      }
      ++pos_;
      if (c == quote) {
        emit(begin, TokenKind::literal);
        return true;
      }
    }
    fail(line_, quote == '\'' ? "unterminated character literal" : "unterminated string literal");
    return false;
  }

  void scan_number() {
    const auto begin = pos_;
    const bool hex = at("0x") || at("0X");
    char prev = 0;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      const bool exponent_sign =
          (c == '+' || c == '-') &&
          (hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E'));
      if (!(is_ident_part(c) || c == '.' || exponent_sign) || c >= 0x80) break;
      if (c == '.' && !dot_may_continue_number()) break;
      prev = static_cast<char>(c);
      ++pos_;
    }
    emit(begin, TokenKind::literal);
  }

  // `1.5`, `1.`, `1.e3`, `1.f` continue the number; `1.toString` does not.
  bool dot_may_continue_number() const {
    const auto next = [&](std::size_t k) -> unsigned char {
      return pos_ + k < src_.size() ? static_cast<unsigned char>(src_[pos_ + k]) : 0;
    };
    if (!is_ident_start(next(1))) return true;
    const auto suffix = next(1);
    const bool float_suffix = suffix == 'e' || suffix == 'E' || suffix == 'f' || suffix == 'F' ||
                              suffix == 'd' || suffix == 'D';
    return float_suffix && !is_ident_part(next(2));
  }

  void scan_word() {
    const auto begin = pos_;
    while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string word(src_.substr(begin, pos_ - begin));
    TokenKind kind = TokenKind::identifier;
    if (profile_.keywords.count(word)) kind = TokenKind::keyword;
    else if (profile_.literal_words.count(word)) kind = TokenKind::literal;
    out_.tokens.push_back(Token{word, line_, kind});
  }

  void scan_symbol() {
    const auto begin = pos_;
    for (const auto& op : profile_.operators) {
      if (at(op)) {
        pos_ += op.size();
        emit(begin, TokenKind::op);
        return;
      }
    }
    const char c = src_[pos_++];
    emit(begin, profile_.punctuation.find(c) != std::string::npos ? TokenKind::punctuation
                                                                   : TokenKind::op);
  }

  std::string_view src_;
  const LanguageProfile& profile_;
  TokenizedFile& out_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::size_t count_lines(std::string_view source) {
  if (source.empty()) return 0;
  const auto newlines = static_cast<std::size_t>(std::count(source.begin(), source.end(), '\n'));
  return newlines + (source.back() == '\n' ? 0 : 1);
}

}  // namespace

TokenizedFile tokenize_file(std::string_view source, const LanguageProfile& profile,
                            std::string path) {
  TokenizedFile file;
  file.path = std::move(path);
  file.line_count = count_lines(source);
  Scanner(source, profile, file).run();

  std::size_t i = 0;
  while (i < file.tokens.size()) {
    const auto line = file.tokens[i].line;
    std::size_t j = i;
    while (j < file.tokens.size() && file.tokens[j].line == line) ++j;
    file.line_types.emplace(line, classify_tokens(std::span<const Token>(file.tokens).subspan(i, j - i)));
    i = j;
  }
  return file;
}

LineType classify_line_type(const TokenizedFile& file, std::size_t line) {
  const auto tokens = file.tokens_on_line(line);
  if (tokens.empty()) throw std::invalid_argument("no tokens on line");
  return classify_tokens(tokens);
}

}  // namespace nbf
