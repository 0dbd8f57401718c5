#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace nbf {

// Seconds since the Unix epoch, UTC.
using Instant = std::int64_t;

inline constexpr Instant kSecondsPerDay = 86400;

// One file touched by a commit. An absent side means the file was added
// (no old text) or deleted (no new text).
struct FileChange {
  std::string path;
  std::optional<std::string> old_text;
  std::optional<std::string> new_text;
};

struct CommitRecord {
  std::string id;
  Instant timestamp = 0;
  std::string message;
  std::vector<FileChange> file_changes;
};

// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS` with optional fraction and a
// `Z` or `+HH:MM` suffix, or an integer epoch. Throws std::invalid_argument.
Instant parse_instant(std::string_view text);
std::string format_date(Instant t);  // YYYY-MM-DD (UTC)
// Start of the UTC day containing t.
Instant floor_to_day(Instant t);

// Reads `commits.jsonl` ({id, timestamp, message, files:[{path, old, new}]},
// old/new being blob paths relative to `blob_root` or null). Records are
// returned stably sorted by timestamp. Errors name the manifest line.
std::vector<CommitRecord> read_commit_manifest(std::istream& in,
                                               const std::filesystem::path& blob_root);
std::vector<CommitRecord> load_commit_manifest(const std::filesystem::path& manifest);

struct SnapshotBoundary {
  Instant start = 0;
  Instant end = 0;                   // exclusive; start + interval
  std::vector<std::size_t> commits;  // indices into the history, in order
};

// Boundaries start, start+interval, ... up to the last commit. Commits
// before `start` belong to no snapshot.
std::vector<SnapshotBoundary> extract_snapshots(std::span<const CommitRecord> history,
                                                Instant interval, Instant start);

// Stems of the bug-fix keywords.
const std::set<std::string>& bugfix_stems();

// Lowercase, split on non-alphanumerics, Porter-stem, intersect with the
// keyword stems.
bool classify_bugfix(std::string_view message);

enum class LineLabel { unchanged, buggy, fixed };

std::string_view to_string(LineLabel label);
std::optional<LineLabel> parse_line_label(std::string_view name);

struct LineRecord {
  std::string snapshot;  // date of the older boundary
  std::string path;
  std::size_t line = 0;
  LineLabel label = LineLabel::unchanged;
  std::string bug_id;  // empty for unchanged lines

  friend auto operator<=>(const LineRecord&, const LineRecord&) = default;
};

// Buggy lines are numbered in the snapshot at the older boundary; fixed
// lines in the new version of the bug-fix commit that added them.
struct LineSets {
  std::set<std::pair<std::string, std::size_t>> unchanged;
  std::set<std::tuple<std::string, std::size_t, std::string>> buggy;
  std::set<std::tuple<std::string, std::size_t, std::string>> fixed;
  // Snapshot lines deleted by kept, non-bug-fix commits.
  std::set<std::pair<std::string, std::size_t>> removed;
  // Per-file commits dropped by the deletion-count filter, as (commit, path).
  std::vector<std::pair<std::string, std::string>> filtered;

  // Records sorted by (path, line, label, bug_id).
  std::vector<LineRecord> records(const std::string& snapshot) const;
};

inline constexpr std::size_t kDefaultMaxDelete = 30;

// `snapshot` maps path to file text at the older boundary; `commits` are the
// interval's commits in time order. A per-file change is kept when it
// deletes between 1 and max_delete lines.
LineSets build_line_sets(const std::map<std::string, std::string>& snapshot,
                         std::span<const CommitRecord> commits, std::size_t max_delete);

// Recursively reads a snapshot tree; keys are '/'-separated relative paths.
// With a non-empty `extensions`, only files with one of them are read.
std::map<std::string, std::string> read_snapshot_tree(const std::filesystem::path& root,
                                                      std::span<const std::string> extensions);

}  // namespace nbf
