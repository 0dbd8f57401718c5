#include "nbf/line_type.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "nbf/lexer.hpp"

namespace nbf {

std::string_view to_string(LineType type) {
  switch (type) {
    case LineType::import_decl: return "import_decl";
    case LineType::package_decl: return "package_decl";
    case LineType::class_decl: return "class_decl";
    case LineType::method_decl: return "method_decl";
    case LineType::field_decl: return "field_decl";
    case LineType::variable_decl: return "variable_decl";
    case LineType::if_stmt: return "if_stmt";
    case LineType::for_stmt: return "for_stmt";
    case LineType::while_stmt: return "while_stmt";
    case LineType::switch_case: return "switch_case";
    case LineType::try_stmt: return "try_stmt";
    case LineType::catch_clause: return "catch_clause";
    case LineType::return_stmt: return "return_stmt";
    case LineType::throw_stmt: return "throw_stmt";
    case LineType::call_stmt: return "call_stmt";
    case LineType::assignment: return "assignment";
    case LineType::annotation: return "annotation";
    case LineType::brace_only: return "brace_only";
    case LineType::other: return "other";
  }
  return "other";
}

std::optional<LineType> parse_line_type(std::string_view name) {
  for (auto type : kAllLineTypes)
    if (to_string(type) == name) return type;
  return std::nullopt;
}

namespace {

const std::unordered_set<std::string> kModifiers = {
    "public",   "private",  "protected", "static",   "final",   "abstract",
    "native",   "transient", "volatile", "strictfp", "default", "synchronized",
    "const",    "extern",   "inline",    "virtual",  "explicit", "constexpr",
    "unsigned", "signed",   "register",  "mutable",  "sealed",   "non-sealed",
};

const std::unordered_set<std::string> kPrimitiveTypes = {
    "int",  "long",  "short", "byte", "char", "boolean", "float",
    "double", "void", "var",  "bool", "auto", "size_t",
};

const std::unordered_set<std::string> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
};

const std::unordered_set<std::string> kTypeKeywords = {"class", "interface", "enum", "record",
                                                       "struct", "union"};

class LineShape {
 public:
  explicit LineShape(std::span<const Token> tokens) : t_(tokens) {}

  LineType classify() {
    if (std::all_of(t_.begin(), t_.end(),
                    [](const Token& t) { return t.kind == TokenKind::punctuation; }))
      return LineType::brace_only;

    while (is("}") || is(")")) ++i_;
    if (done()) return LineType::brace_only;

    const std::string& head = t_[i_].text;
    if (head == "import" || head == "using") return LineType::import_decl;
    if (head == "#" && (is_at(i_ + 1, "include") || is_at(i_ + 1, "import")))
      return LineType::import_decl;
    if (head == "package" || head == "namespace") return LineType::package_decl;
    if (head == "catch") return LineType::catch_clause;
    if (head == "try" || head == "finally") return LineType::try_stmt;
    if (head == "if" || head == "else") return LineType::if_stmt;
    if (head == "for") return LineType::for_stmt;
    if (head == "while" || head == "do") return LineType::while_stmt;
    if (head == "switch" || head == "case") return LineType::switch_case;
    if (head == "default" && (is_at(i_ + 1, ":") || is_at(i_ + 1, "->")))
      return LineType::switch_case;
    if (head == "return") return LineType::return_stmt;
    if (head == "throw") return LineType::throw_stmt;
    if (head == "synchronized" && is_at(i_ + 1, "(")) return LineType::other;

    skip_annotations();
    if (done()) return LineType::annotation;

    const auto before_modifiers = i_;
    while (!done() && kModifiers.count(t_[i_].text)) {
      ++i_;
      skip_annotations();
    }
    const bool has_modifiers = i_ > before_modifiers;
    if (done()) return LineType::other;

    if (declares_type()) return LineType::class_decl;

    // Generic method type parameters: `<T> T first(...)`.
    if (is("<")) skip_angle_brackets();

    if (const auto decl = declaration(has_modifiers)) return *decl;
    if (looks_like_constructor(has_modifiers)) return LineType::method_decl;
    if (has_assignment()) return LineType::assignment;
    if (has_call()) return LineType::call_stmt;
    return LineType::other;
  }

 private:
  bool done() const { return i_ >= t_.size(); }
  bool is(std::string_view s) const { return is_at(i_, s); }
  bool is_at(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].text == s; }

  bool is_name_at(std::size_t k) const {
    return k < t_.size() && t_[k].kind == TokenKind::identifier;
  }

  void skip_annotations() {
    while (is("@") && !is_at(i_ + 1, "interface") && is_name_at(i_ + 1)) {
      i_ += 2;
      while (is(".") && is_name_at(i_ + 1)) i_ += 2;
      if (is("(")) skip_balanced("(", ")");
    }
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    while (!done()) {
      if (is(open)) ++depth;
      else if (is(close)) --depth;
      ++i_;
      if (depth == 0) return;
    }
  }

  // `>>` and `>>>` close several levels of generics at once.
  void skip_angle_brackets() {
    int depth = 0;
    while (!done()) {
      const auto& s = t_[i_].text;
      if (s == "<") ++depth;
      else if (s == ">") depth -= 1;
      else if (s == ">>") depth -= 2;
      else if (s == ">>>") depth -= 3;
      else if (s != "," && s != "?" && s != "." && s != "extends" && s != "super" && s != "&" &&
               s != "[" && s != "]" && t_[i_].kind != TokenKind::identifier &&
               !kPrimitiveTypes.count(s))
        return;
      ++i_;
      if (depth <= 0) return;
    }
  }

  bool declares_type() const {
    for (std::size_t k = i_; k < t_.size(); ++k) {
      if (t_[k].text == "{" || t_[k].text == "(" || t_[k].text == "=") {
        // `record Point(int x, int y) {` declares a type despite the paren.
        return t_[k].text == "(" && k >= 2 && t_[k - 2].text == "record";
      }
      if (kTypeKeywords.count(t_[k].text) && t_[k].text != "record" &&
          !(k > 0 && (t_[k - 1].text == "." || t_[k - 1].text == "::")))
        return true;
      if (t_[k].text == "@" && is_at(k + 1, "interface")) return true;
    }
    return false;
  }

  // Type name [generics] [arrays|pointers] identifier, then ( = ; , [ or :
  std::optional<LineType> declaration(bool has_modifiers) {
    auto k = i_;
    if (k >= t_.size()) return std::nullopt;
    if (!(is_name_at(k) || kPrimitiveTypes.count(t_[k].text))) return std::nullopt;
    ++k;
    while (is_at(k, ".") && is_name_at(k + 1)) k += 2;
    if (is_at(k, "::") && is_name_at(k + 1)) k += 2;
    if (is_at(k, "<")) {
      const auto saved = i_;
      i_ = k;
      skip_angle_brackets();
      k = i_;
      i_ = saved;
    }
    while ((is_at(k, "[") && is_at(k + 1, "]")) || is_at(k, "*") || is_at(k, "&") ||
           is_at(k, "**") || is_at(k, "&&") || is_at(k, "...")) {
      k += is_at(k, "[") ? 2 : 1;
    }
    if (!is_name_at(k)) return std::nullopt;
    ++k;
    if (is_at(k, "(")) return LineType::method_decl;
    if (is_at(k, "=") || is_at(k, ";") || is_at(k, ",") || is_at(k, "[") || is_at(k, ":"))
      return has_modifiers ? LineType::field_decl : LineType::variable_decl;
    return std::nullopt;
  }

  bool looks_like_constructor(bool has_modifiers) const {
    if (!is_name_at(i_) || !is_at(i_ + 1, "(")) return false;
    if (has_modifiers) return true;
    int depth = 0;
    for (auto k = i_ + 1; k < t_.size(); ++k) {
      if (t_[k].text == "(") ++depth;
      else if (t_[k].text == ")" && --depth == 0)
        return is_at(k + 1, "{") || is_at(k + 1, "throws");
    }
    return false;
  }

  bool has_assignment() const {
    int depth = 0;
    for (auto k = i_; k < t_.size(); ++k) {
      const auto& s = t_[k].text;
      if (s == "(" || s == "[") ++depth;
      else if (s == ")" || s == "]") --depth;
      else if (depth <= 0 && kAssignOps.count(s)) return true;
      else if (depth <= 0 && (s == "++" || s == "--")) return true;
    }
    return false;
  }

  bool has_call() const {
    for (auto k = i_; k < t_.size(); ++k) {
      if (t_[k].text == "new") return true;
      if ((t_[k].kind == TokenKind::identifier || t_[k].text == "this" || t_[k].text == "super") &&
          is_at(k + 1, "("))
        return true;
    }
    return false;
  }

  std::span<const Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

LineType classify_tokens(std::span<const Token> tokens) {
  if (tokens.empty()) throw std::invalid_argument("no tokens on line");
  return LineShape(tokens).classify();
}

}  // namespace nbf
