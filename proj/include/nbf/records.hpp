#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbf/evaluator.hpp"
#include "nbf/miner.hpp"
#include "nbf/scorer.hpp"

namespace nbf {

// Every output starts with the effective configuration: a `{"#config": ...}`
// record in JSON-lines files, a `# config: ...` line in delimited ones.
// Readers skip both.

void write_line_records(std::ostream& out, std::span<const LineRecord> records,
                        const nlohmann::ordered_json& config);
// Errors name the input line.
std::vector<LineRecord> read_line_records(std::istream& in);

// Buggy records of one snapshot grouped by bug id.
BugMap bugs_from_records(std::span<const LineRecord> records, const std::string& snapshot);

enum class ScoreColumns { raw, type, weighted };
enum class ScoreFormat { jsonl, tsv };

void write_scores(std::ostream& out, std::span<const LineScore> scores,
                  const nlohmann::ordered_json& config, ScoreColumns columns, ScoreFormat format);

struct ScoreFile {
  std::vector<LineScore> scores;
  bool has_z = false;
  bool has_weighted = false;
};

// Reads either format (detected from the first record).
ScoreFile read_scores(std::istream& in);

// JSON-lines {tool, path, start_line, end_line, priority}.
std::vector<Warning> read_warnings(std::istream& in);

// `x<TAB>y` rows under a header.
void write_curve(std::ostream& out, const EvalCurve& curve,
                 const nlohmann::ordered_json& config = nullptr);

}  // namespace nbf
