#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace nbf {

struct Token;

enum class LineType {
  import_decl,
  package_decl,
  class_decl,
  method_decl,
  field_decl,
  variable_decl,
  if_stmt,
  for_stmt,
  while_stmt,
  switch_case,
  try_stmt,
  catch_clause,
  return_stmt,
  throw_stmt,
  call_stmt,
  assignment,
  annotation,
  brace_only,
  other,
};

inline constexpr std::array<LineType, 19> kAllLineTypes = {
    LineType::import_decl,  LineType::package_decl, LineType::class_decl,
    LineType::method_decl,  LineType::field_decl,   LineType::variable_decl,
    LineType::if_stmt,      LineType::for_stmt,     LineType::while_stmt,
    LineType::switch_case,  LineType::try_stmt,     LineType::catch_clause,
    LineType::return_stmt,  LineType::throw_stmt,   LineType::call_stmt,
    LineType::assignment,   LineType::annotation,   LineType::brace_only,
    LineType::other,
};

std::string_view to_string(LineType type);
std::optional<LineType> parse_line_type(std::string_view name);

// Heuristic syntactic category from the tokens of one physical line: the
// first significant token plus a handful of declaration/statement shapes.
// `tokens` must be non-empty.
LineType classify_tokens(std::span<const Token> tokens);

}  // namespace nbf
