#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nbf {

// Lexical conventions of one source language. Profiles are plain data so a
// new language needs a new profile file, not new lexer code.
struct LanguageProfile {
  std::string name;
  std::vector<std::string> extensions;
  std::unordered_set<std::string> keywords;
  // Words lexed as literals rather than identifiers (true, false, null).
  std::unordered_set<std::string> literal_words;
  std::vector<std::string> line_comments;
  std::vector<std::pair<std::string, std::string>> block_comments;
  std::string string_quotes = "\"";
  std::string char_quotes = "'";
  char escape = '\\';
  // Multi-character operators; matched longest first.
  std::vector<std::string> operators;
  std::string punctuation = "(){}[];,.@";

  static LanguageProfile java();

  static LanguageProfile from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  bool has_extension(const std::filesystem::path& file) const;
};

// Throws std::runtime_error when the file is missing or malformed.
LanguageProfile load_profile(const std::filesystem::path& file);

}  // namespace nbf
