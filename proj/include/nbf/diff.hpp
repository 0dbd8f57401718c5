#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nbf {

// Splits on '\n'. A trailing newline does not start another line, and a
// trailing '\r' is kept as part of its line.
std::vector<std::string> split_lines(std::string_view text);

// Line-level edit between two versions of a file. Line numbers are 1-based.
struct LineDiff {
  std::vector<std::size_t> deleted;  // old-version lines, ascending
  std::vector<std::size_t> added;    // new-version lines, ascending
  // old_to_new[i-1] is the new line number of kept old line i, 0 if deleted.
  std::vector<std::size_t> old_to_new;
};

// Minimal (shortest edit script) line diff via Myers' linear-space
// bisection.
LineDiff diff_lines(const std::vector<std::string>& old_lines,
                    const std::vector<std::string>& new_lines);
LineDiff diff_versions(std::string_view old_text, std::string_view new_text);

}  // namespace nbf
