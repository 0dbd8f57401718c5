#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbf/language_profile.hpp"
#include "nbf/line_type.hpp"

namespace nbf {

enum class TokenKind { identifier, keyword, literal, op, punctuation };

std::string_view to_string(TokenKind kind);

struct Token {
  std::string text;
  std::size_t line = 0;  // 1-based
  TokenKind kind = TokenKind::identifier;

  friend bool operator==(const Token&, const Token&) = default;
};

// Recoverable lexing problem. Tokens before the problem are kept.
struct Diagnostic {
  std::string path;
  std::size_t line = 0;
  std::string message;

  std::string to_string() const;
};

struct TokenizedFile {
  std::string path;
  std::vector<Token> tokens;
  std::size_t line_count = 0;
  std::map<std::size_t, LineType> line_types;
  std::vector<Diagnostic> diagnostics;

  // Tokens recorded on `line`, in source order. Empty when none.
  std::span<const Token> tokens_on_line(std::size_t line) const;

  std::vector<std::string> token_texts() const;
};

// Comment-free token stream with 1-based line provenance. Never throws on
// malformed input: an unterminated string or comment produces a Diagnostic
// and the rest of the file is skipped.
TokenizedFile tokenize_file(std::string_view source,
                            const LanguageProfile& profile,
                            std::string path = {});

// Throws std::invalid_argument("no tokens on line") for token-less lines.
LineType classify_line_type(const TokenizedFile& file, std::size_t line);

}  // namespace nbf
