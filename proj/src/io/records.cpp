#include "nbf/records.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nbf {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

LineType line_type_of(const std::string& name) {
  const auto t = parse_line_type(name);
  if (!t) throw std::invalid_argument("unknown line type '" + name + "'");
  return *t;
}

// Runs `fn` on each data line, prefixing errors with the line number.
template <typename Fn>
void for_each_line(std::istream& in, const char* what, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      fn(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(what) + " line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
}

}  // namespace

void write_line_records(std::ostream& out, std::span<const LineRecord> records,
                        const ordered_json& config) {
  out << ordered_json{{"#config", config}}.dump() << '\n';
  for (const auto& r : records) {
    ordered_json j;
    j["snapshot"] = r.snapshot;
    j["path"] = r.path;
    j["line"] = r.line;
    j["label"] = to_string(r.label);
    if (!r.bug_id.empty()) j["bug_id"] = r.bug_id;
    out << j.dump() << '\n';
  }
}

std::vector<LineRecord> read_line_records(std::istream& in) {
  std::vector<LineRecord> records;
  for_each_line(in, "linesets", [&](const std::string& line) {
    const auto j = json::parse(line);
    if (j.contains("#config")) return;
    LineRecord r;
    r.snapshot = j.at("snapshot").get<std::string>();
    r.path = j.at("path").get<std::string>();
    r.line = j.at("line").get<std::size_t>();
    const auto label = j.at("label").get<std::string>();
    const auto parsed = parse_line_label(label);
    if (!parsed) throw std::invalid_argument("unknown label '" + label + "'");
    r.label = *parsed;
    r.bug_id = j.value("bug_id", std::string());
    if (r.label != LineLabel::unchanged && r.bug_id.empty())
      throw std::invalid_argument("buggy/fixed record without bug_id");
    records.push_back(std::move(r));
  });
  return records;
}

BugMap bugs_from_records(std::span<const LineRecord> records, const std::string& snapshot) {
  BugMap bugs;
  for (const auto& r : records)
    if (r.snapshot == snapshot && r.label == LineLabel::buggy) bugs[r.bug_id].emplace(r.path, r.line);
  return bugs;
}

void write_scores(std::ostream& out, std::span<const LineScore> scores, const ordered_json& config,
                  ScoreColumns columns, ScoreFormat format) {
  const bool with_z = columns != ScoreColumns::raw;
  if (format == ScoreFormat::jsonl) {
    out << ordered_json{{"#config", config}}.dump() << '\n';
    for (const auto& s : scores) {
      ordered_json j;
      j["path"] = s.path;
      j["line"] = s.line;
      j["line_type"] = to_string(s.line_type);
      j["entropy"] = s.entropy;
      if (with_z) {
        j["z"] = s.z;
        j["weighted"] = s.weighted;
      }
      j["token_count"] = s.token_count;
      out << j.dump() << '\n';
    }
    return;
  }
  out << "# config: " << config.dump() << '\n';
  out << "path\tline\tline_type\tentropy" << (with_z ? "\tz\tweighted" : "") << "\ttoken_count\n";
  for (const auto& s : scores) {
    out << s.path << '\t' << s.line << '\t' << to_string(s.line_type) << '\t' << shortest(s.entropy);
    if (with_z) out << '\t' << shortest(s.z) << '\t' << shortest(s.weighted);
    out << '\t' << s.token_count << '\n';
  }
}

ScoreFile read_scores(std::istream& in) {
  ScoreFile file;
  bool first = true;
  bool tsv = false;
  std::vector<std::string> header;
  for_each_line(in, "scores", [&](const std::string& line) {
    if (line.rfind("# config:", 0) == 0 || (tsv && line[0] == '#')) return;
    if (first) {
      first = false;
      tsv = line[0] != '{';
      file.has_z = file.has_weighted = true;
      if (tsv) {
        std::istringstream fields(line);
        for (std::string f; std::getline(fields, f, '\t');) header.push_back(f);
        for (const char* need : {"path", "line", "line_type", "entropy", "token_count"})
          if (std::find(header.begin(), header.end(), need) == header.end())
            throw std::invalid_argument(std::string("missing column ") + need);
        file.has_z = std::find(header.begin(), header.end(), "z") != header.end();
        file.has_weighted = std::find(header.begin(), header.end(), "weighted") != header.end();
        return;
      }
    }
    LineScore s;
    if (tsv) {
      std::istringstream fields(line);
      std::vector<std::string> values;
      for (std::string f; std::getline(fields, f, '\t');) values.push_back(f);
      if (values.size() != header.size()) throw std::invalid_argument("wrong number of columns");
      for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& h = header[i];
        const auto& v = values[i];
        if (h == "path") s.path = v;
        else if (h == "line") s.line = parse_size(v);
        else if (h == "line_type") s.line_type = line_type_of(v);
        else if (h == "entropy") s.entropy = parse_double(v);
        else if (h == "z") s.z = parse_double(v);
        else if (h == "weighted") s.weighted = parse_double(v);
        else if (h == "token_count") s.token_count = parse_size(v);
      }
    } else {
      const auto j = json::parse(line);
      if (j.contains("#config")) return;
      s.path = j.at("path").get<std::string>();
      s.line = j.at("line").get<std::size_t>();
      s.line_type = line_type_of(j.at("line_type").get<std::string>());
      s.entropy = j.at("entropy").get<double>();
      s.token_count = j.at("token_count").get<std::size_t>();
      if (j.contains("z")) s.z = j.at("z").get<double>();
      else file.has_z = false;
      if (j.contains("weighted")) s.weighted = j.at("weighted").get<double>();
      else file.has_weighted = false;
    }
    file.scores.push_back(std::move(s));
  });
  return file;
}

std::vector<Warning> read_warnings(std::istream& in) {
  std::vector<Warning> warnings;
  for_each_line(in, "warnings", [&](const std::string& line) {
    const auto j = json::parse(line);
    if (j.contains("#config")) return;
    Warning w;
    w.tool = j.value("tool", std::string());
    w.path = j.at("path").get<std::string>();
    w.start_line = j.at("start_line").get<std::size_t>();
    w.end_line = j.value("end_line", w.start_line);
    w.priority = j.at("priority").get<int>();
    w.validate();
    warnings.push_back(std::move(w));
  });
  return warnings;
}

void write_curve(std::ostream& out, const EvalCurve& curve, const ordered_json& config) {
  if (!config.is_null()) out << "# config: " << config.dump() << '\n';
  out << "x\ty\n";
  for (const auto& [x, y] : curve.points) out << shortest(x) << '\t' << shortest(y) << '\n';
}

}  // namespace nbf
