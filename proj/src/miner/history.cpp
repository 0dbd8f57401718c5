#include <algorithm>
#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nbf/miner.hpp"

namespace nbf {

namespace {

int parse_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
  if (pos + len > s.size()) throw std::invalid_argument("bad timestamp: " + std::string(whole));
  int v = 0;
  const auto* first = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc() || ptr != first + len)
    throw std::invalid_argument("bad timestamp: " + std::string(whole));
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Instant parse_instant(std::string_view text) {
  const bool numeric = !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '-';
  }) && text.find('-', 1) == std::string_view::npos;
  if (numeric) {
    Instant v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw std::invalid_argument("bad timestamp: " + std::string(text));
    return v;
  }

  if (text.size() < 10 || text[4] != '-' || text[7] != '-')
    throw std::invalid_argument("bad timestamp: " + std::string(text));
  std::tm tm{};
  tm.tm_year = parse_int(text, 0, 4, text) - 1900;
  tm.tm_mon = parse_int(text, 5, 2, text) - 1;
  tm.tm_mday = parse_int(text, 8, 2, text);
  std::size_t pos = 10;
  Instant offset = 0;
  if (pos < text.size()) {
    if ((text[pos] != 'T' && text[pos] != ' ') || text.size() < pos + 9 || text[pos + 3] != ':' ||
        text[pos + 6] != ':')
      throw std::invalid_argument("bad timestamp: " + std::string(text));
    tm.tm_hour = parse_int(text, pos + 1, 2, text);
    tm.tm_min = parse_int(text, pos + 4, 2, text);
    tm.tm_sec = parse_int(text, pos + 7, 2, text);
    pos += 9;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos < text.size()) {
      const char sign = text[pos];
      if (sign == 'Z' && pos + 1 == text.size()) {
        pos = text.size();
      } else if ((sign == '+' || sign == '-') && text.size() == pos + 6 && text[pos + 3] == ':') {
        offset = parse_int(text, pos + 1, 2, text) * 3600 + parse_int(text, pos + 4, 2, text) * 60;
        if (sign == '-') offset = -offset;
      } else {
        throw std::invalid_argument("bad timestamp: " + std::string(text));
      }
    }
  }
  if (tm.tm_mon < 0 || tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 || tm.tm_hour > 23 ||
      tm.tm_min > 59 || tm.tm_sec > 60)
    throw std::invalid_argument("bad timestamp: " + std::string(text));
  return static_cast<Instant>(timegm(&tm)) - offset;
}

Instant floor_to_day(Instant t) {
  Instant r = t % kSecondsPerDay;
  if (r < 0) r += kSecondsPerDay;
  return t - r;
}

std::string format_date(Instant t) {
  const std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

std::vector<CommitRecord> read_commit_manifest(std::istream& in,
                                               const std::filesystem::path& blob_root) {
  std::vector<CommitRecord> commits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "commits manifest line " + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      CommitRecord c;
      c.id = j.at("id").get<std::string>();
      const auto& ts = j.at("timestamp");
      c.timestamp = ts.is_number_integer() ? ts.get<Instant>() : parse_instant(ts.get<std::string>());
      c.message = j.value("message", std::string());
      for (const auto& f : j.at("files")) {
        FileChange change;
        change.path = f.at("path").get<std::string>();
        if (f.contains("old") && !f.at("old").is_null())
          change.old_text = read_file(blob_root / f.at("old").get<std::string>());
        if (f.contains("new") && !f.at("new").is_null())
          change.new_text = read_file(blob_root / f.at("new").get<std::string>());
        if (!change.old_text && !change.new_text)
          throw std::invalid_argument("file change for " + change.path + " has neither old nor new");
        c.file_changes.push_back(std::move(change));
      }
      commits.push_back(std::move(c));
    } catch (const std::exception& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  std::stable_sort(commits.begin(), commits.end(),
                   [](const CommitRecord& a, const CommitRecord& b) { return a.timestamp < b.timestamp; });
  return commits;
}

std::vector<CommitRecord> load_commit_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot read " + manifest.string());
  return read_commit_manifest(in, manifest.parent_path());
}

std::map<std::string, std::string> read_snapshot_tree(const std::filesystem::path& root,
                                                      std::span<const std::string> extensions) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw std::runtime_error("not a directory: " + root.string());
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (!extensions.empty() &&
        std::find(extensions.begin(), extensions.end(), ext) == extensions.end())
      continue;
    files.emplace(fs::relative(entry.path(), root).generic_string(), read_file(entry.path()));
  }
  return files;
}

}  // namespace nbf
