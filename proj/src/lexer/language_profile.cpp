#include "nbf/language_profile.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace nbf {

namespace {

std::vector<std::string> sorted(const std::unordered_set<std::string>& words) {
  std::vector<std::string> out(words.begin(), words.end());
  std::sort(out.begin(), out.end());
  return out;
}

void sort_operators(std::vector<std::string>& ops) {
  // Longest first so the lexer can take the first match.
  std::stable_sort(ops.begin(), ops.end(), [](const auto& a, const auto& b) {
    return a.size() > b.size();
  });
}

}  // namespace

LanguageProfile LanguageProfile::java() {
  LanguageProfile p;
  p.name = "java";
  p.extensions = {".java"};
  p.keywords = {
      "abstract", "assert",     "boolean",   "break",     "byte",
      "case",     "catch",      "char",      "class",     "const",
      "continue", "default",    "do",        "double",    "else",
      "enum",     "extends",    "final",     "finally",   "float",
      "for",      "goto",       "if",        "implements", "import",
      "instanceof", "int",      "interface", "long",      "native",
      "new",      "package",    "private",   "protected", "public",
      "return",   "short",      "static",    "strictfp",  "super",
      "switch",   "synchronized", "this",    "throw",     "throws",
      "transient", "try",       "void",      "volatile",  "while",
  };
  p.literal_words = {"true", "false", "null"};
  p.line_comments = {"//"};
  p.block_comments = {{"/*", "*/"}};
  p.string_quotes = "\"";
  p.char_quotes = "'";
  p.escape = '\\';
  p.operators = {
      ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&",
      "||",   "==",  "!=",  "<=",  ">=",  "+=", "-=", "*=", "/=", "%=",
      "&=",   "|=",  "^=",  "<<",  ">>",  "=",  "<",  ">",  "!",  "~",
      "?",    ":",   "+",   "-",   "*",   "/",  "&",  "|",  "^",  "%",
  };
  sort_operators(p.operators);
  p.punctuation = "(){}[];,.@";
  return p;
}

LanguageProfile LanguageProfile::from_json(const nlohmann::json& doc) {
  LanguageProfile p;
  p.name = doc.at("name").get<std::string>();
  p.extensions = doc.value("extensions", std::vector<std::string>{});
  for (const auto& k : doc.at("keywords")) p.keywords.insert(k.get<std::string>());
  for (const auto& k : doc.value("literal_words", nlohmann::json::array()))
    p.literal_words.insert(k.get<std::string>());
  p.line_comments = doc.value("line_comments", std::vector<std::string>{});
  for (const auto& pair : doc.value("block_comments", nlohmann::json::array())) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::runtime_error("block_comments entries must be [open, close] pairs");
    p.block_comments.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  p.string_quotes = doc.value("string_quotes", std::string("\""));
  p.char_quotes = doc.value("char_quotes", std::string("'"));
  const auto escape = doc.value("escape", std::string("\\"));
  if (escape.size() != 1) throw std::runtime_error("escape must be a single character");
  p.escape = escape[0];
  p.operators = doc.value("operators", std::vector<std::string>{});
  for (const auto& op : p.operators)
    if (op.empty()) throw std::runtime_error("empty operator in profile");
  sort_operators(p.operators);
  p.punctuation = doc.value("punctuation", std::string("(){}[];,.@"));
  for (const auto& c : p.line_comments)
    if (c.empty()) throw std::runtime_error("empty line-comment prefix in profile");
  for (const auto& [open, close] : p.block_comments)
    if (open.empty() || close.empty()) throw std::runtime_error("empty block-comment delimiter");
  return p;
}

nlohmann::json LanguageProfile::to_json() const {
  nlohmann::ordered_json doc;
  doc["name"] = name;
  doc["extensions"] = extensions;
  doc["keywords"] = sorted(keywords);
  doc["literal_words"] = sorted(literal_words);
  doc["line_comments"] = line_comments;
  auto blocks = nlohmann::json::array();
  for (const auto& [open, close] : block_comments) blocks.push_back({open, close});
  doc["block_comments"] = blocks;
  doc["string_quotes"] = string_quotes;
  doc["char_quotes"] = char_quotes;
  doc["escape"] = std::string(1, escape);
  doc["operators"] = operators;
  doc["punctuation"] = punctuation;
  return doc;
}

bool LanguageProfile::has_extension(const std::filesystem::path& file) const {
  const auto ext = file.extension().string();
  return std::find(extensions.begin(), extensions.end(), ext) != extensions.end();
}

LanguageProfile load_profile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open language profile: " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    return LanguageProfile::from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed language profile " + file.string() + ": " + e.what());
  }
}

}  // namespace nbf
