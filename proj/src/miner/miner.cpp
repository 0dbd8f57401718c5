#include "nbf/miner.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "nbf/diff.hpp"
#include "nbf/porter_stemmer.hpp"

namespace nbf {

std::vector<SnapshotBoundary> extract_snapshots(std::span<const CommitRecord> history,
                                                Instant interval, Instant start) {
  if (interval <= 0) throw std::invalid_argument("snapshot interval must be positive");
  std::vector<SnapshotBoundary> out;
  if (history.empty()) return out;
  const Instant last = history.back().timestamp;
  for (Instant b = start; b <= last; b += interval) out.push_back({b, b + interval, {}});
  for (std::size_t i = 0; i < history.size(); ++i) {
    const Instant t = history[i].timestamp;
    if (t < start) continue;
    out[static_cast<std::size_t>((t - start) / interval)].commits.push_back(i);
  }
  return out;
}

const std::set<std::string>& bugfix_stems() {
  static const std::set<std::string> stems = [] {
    std::set<std::string> s;
    for (const char* word :
         {"error", "bug", "fix", "issue", "mistake", "incorrect", "fault", "defect", "flaw"})
      s.insert(porter_stem(word));
    return s;
  }();
  return stems;
}

bool classify_bugfix(std::string_view message) {
  const auto& stems = bugfix_stems();
  std::string word;
  auto flush = [&] {
    const bool hit = !word.empty() && stems.count(porter_stem(word)) > 0;
    word.clear();
    return hit;
  };
  for (char c : message) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      word += static_cast<char>(std::tolower(u));
    } else if (flush()) {
      return true;
    }
  }
  return flush();
}

std::string_view to_string(LineLabel label) {
  switch (label) {
    case LineLabel::unchanged: return "unchanged";
    case LineLabel::buggy: return "buggy";
    case LineLabel::fixed: return "fixed";
  }
  return "unchanged";
}

std::optional<LineLabel> parse_line_label(std::string_view name) {
  for (auto l : {LineLabel::unchanged, LineLabel::buggy, LineLabel::fixed})
    if (to_string(l) == name) return l;
  return std::nullopt;
}

std::vector<LineRecord> LineSets::records(const std::string& snapshot) const {
  std::vector<LineRecord> out;
  out.reserve(unchanged.size() + buggy.size() + fixed.size());
  for (const auto& [path, line] : unchanged)
    out.push_back({snapshot, path, line, LineLabel::unchanged, {}});
  for (const auto& [path, line, bug] : buggy) out.push_back({snapshot, path, line, LineLabel::buggy, bug});
  for (const auto& [path, line, bug] : fixed) out.push_back({snapshot, path, line, LineLabel::fixed, bug});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// A file's current lines and, per line, its snapshot line number (0 when
// the line was written after the snapshot).
struct Tracked {
  std::vector<std::string> lines;
  std::vector<std::size_t> origin;
};

std::vector<std::size_t> carry_origin(const LineDiff& diff, const std::vector<std::size_t>& origin,
                                      std::size_t new_size) {
  std::vector<std::size_t> out(new_size, 0);
  for (std::size_t i = 0; i < diff.old_to_new.size(); ++i)
    if (diff.old_to_new[i]) out[diff.old_to_new[i] - 1] = origin[i];
  return out;
}

}  // namespace

LineSets build_line_sets(const std::map<std::string, std::string>& snapshot,
                         std::span<const CommitRecord> commits, std::size_t max_delete) {
  std::map<std::string, Tracked> files;
  for (const auto& [path, text] : snapshot) {
    auto& t = files[path];
    t.lines = split_lines(text);
    t.origin.resize(t.lines.size());
    for (std::size_t i = 0; i < t.origin.size(); ++i) t.origin[i] = i + 1;
  }

  LineSets sets;
  for (const auto& commit : commits) {
    const bool bugfix = classify_bugfix(commit.message);
    for (const auto& change : commit.file_changes) {
      const auto old_lines = change.old_text ? split_lines(*change.old_text) : std::vector<std::string>{};
      const auto new_lines = change.new_text ? split_lines(*change.new_text) : std::vector<std::string>{};

      // Align the commit's old side with what we track, in case the
      // manifest skips an intermediate version.
      std::vector<std::size_t> origin(old_lines.size(), 0);
      if (const auto it = files.find(change.path); it != files.end()) {
        origin = it->second.lines == old_lines
                     ? it->second.origin
                     : carry_origin(diff_lines(it->second.lines, old_lines), it->second.origin,
                                    old_lines.size());
      }

      const auto diff = diff_lines(old_lines, new_lines);
      const auto deleted = diff.deleted.size();
      const bool kept = deleted >= 1 && deleted <= max_delete;
      if (!kept) sets.filtered.emplace_back(commit.id, change.path);
      if (kept) {
        for (auto line : diff.deleted) {
          const auto snap_line = origin[line - 1];
          if (!snap_line) continue;
          if (bugfix)
            sets.buggy.emplace(change.path, snap_line, commit.id);
          else
            sets.removed.emplace(change.path, snap_line);
        }
        if (bugfix)
          for (auto line : diff.added) sets.fixed.emplace(change.path, line, commit.id);
      }

      if (change.new_text) {
        auto& t = files[change.path];
        t.origin = carry_origin(diff, origin, new_lines.size());
        t.lines = new_lines;
      } else {
        files.erase(change.path);
      }
    }
  }

  std::set<std::pair<std::string, std::size_t>> buggy_lines;
  for (const auto& [path, line, bug] : sets.buggy) buggy_lines.emplace(path, line);
  for (const auto& [path, text] : snapshot) {
    const auto n = split_lines(text).size();
    for (std::size_t line = 1; line <= n; ++line) {
      const std::pair<std::string, std::size_t> key(path, line);
      if (!buggy_lines.count(key) && !sets.removed.count(key)) sets.unchanged.insert(key);
    }
  }
  return sets;
}

}  // namespace nbf
