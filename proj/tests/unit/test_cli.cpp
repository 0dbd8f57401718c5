#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nbf/cli.hpp"
#include "nbf/records.hpp"
#include "support.hpp"

namespace nbf {
namespace {

using testing::read_text;
using testing::TempDir;
using testing::write_text;
const std::string kFixtures = NBF_FIXTURE_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run nbf(std::vector<std::string> args) {
  args.insert(args.begin(), "nbf");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_tree(const std::filesystem::path& root,
                const std::vector<std::pair<std::string, std::string>>& files) {
  for (const auto& [path, text] : files) write_text(root / path, text);
}

void write_linesets(const std::filesystem::path& p, const std::vector<LineRecord>& records) {
  std::ostringstream buf;
  write_line_records(buf, records, {{"command", "test"}});
  write_text(p, buf.str());
}

std::vector<LineRecord> injected_records(const testing::SyntheticCorpus& c, const std::string& snap) {
  std::vector<LineRecord> r;
  std::size_t id = 0;
  for (const auto& [path, line] : c.injected)
    r.push_back({snap, path, line, LineLabel::buggy, "bug" + std::to_string(id++)});
  return r;
}

// ---------------------------------------------------------------- mine

TEST(CliMine, MatchesGoldenFile) {
  const auto r = nbf({"mine", "--commits", kFixtures + "/mining/commits.jsonl", "--snapshots",
                      kFixtures + "/mining/snapshots"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_text(kFixtures + "/mining/golden_linesets.jsonl"));
  EXPECT_NE(r.err.find("skipped by the deleted-line filter"), std::string::npos);
}

TEST(CliMine, WritesToFile) {
  TempDir dir("mine");
  const auto out = (dir / "nested/linesets.jsonl").string();
  const auto r = nbf({"mine", "--commits", kFixtures + "/mining/commits.jsonl", "--snapshots",
                      kFixtures + "/mining/snapshots", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(out), read_text(kFixtures + "/mining/golden_linesets.jsonl"));
}

TEST(CliMine, EmptyManifestGivesHeaderOnly) {
  TempDir dir("mine-empty");
  write_text(dir / "commits.jsonl", "");
  std::filesystem::create_directories(dir / "snapshots");
  const auto r = nbf({"mine", "--commits", (dir / "commits.jsonl").string(), "--snapshots",
                      (dir / "snapshots").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  EXPECT_EQ(r.out.rfind("{\"#config\":", 0), 0u);
}

TEST(CliMine, MalformedManifestNamesTheLine) {
  TempDir dir("mine-bad");
  write_text(dir / "commits.jsonl", "{\"id\":\"a\",\"timestamp\":1,\"files\":[]}\nnot json\n");
  const auto r = nbf({"mine", "--commits", (dir / "commits.jsonl").string(), "--snapshots",
                      (dir / "snapshots").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("nbf mine: error:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(CliMine, MissingRequiredFlag) {
  const auto r = nbf({"mine", "--snapshots", "x"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--commits"), std::string::npos) << r.err;
}

// ---------------------------------------------------------------- score

TEST(CliScore, ByteIdenticalAcrossRunsAndJobs) {
  TempDir dir("score");
  const auto corpus = testing::injected_corpus(8, 30, 8, 4);
  write_tree(dir / "snap", corpus.files);
  const auto input = (dir / "snap").string();
  const auto a = nbf({"score", "--input", input});
  const auto b = nbf({"score", "--input", input});
  const auto c = nbf({"--jobs", "4", "score", "--input", input});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto tsv1 = nbf({"score", "--input", input, "--format", "tsv", "--columns", "raw"});
  const auto tsv2 = nbf({"-j", "3", "score", "--input", input, "--format", "tsv", "--columns", "raw"});
  ASSERT_EQ(tsv1.code, 0) << tsv1.err;
  EXPECT_EQ(tsv1.out, tsv2.out);
  EXPECT_EQ(tsv1.out.find("\tz\t"), std::string::npos);
}

TEST(CliScore, ConfigHeaderListsModelSettings) {
  TempDir dir("score-header");
  write_tree(dir / "snap", testing::injected_corpus(3, 10, 0, 1).files);
  const auto r = nbf({"score", "--input", (dir / "snap").string(), "--gamma", "2.5", "--order", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto header = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(header["#config"]["gamma"], 2.5);
  EXPECT_EQ(header["#config"]["order"], 4);
  EXPECT_EQ(header["#config"]["columns"], "type");
  EXPECT_FALSE(header["#config"].contains("input"));
}

TEST(CliScore, MissingProfileFails) {
  TempDir dir("score-profile");
  write_tree(dir / "snap", testing::injected_corpus(2, 5, 0, 1).files);
  const auto r = nbf({"score", "--input", (dir / "snap").string(), "--profile", "cobol"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("cobol"), std::string::npos) << r.err;
}

TEST(CliScore, WeightedColumnsNeedWeights) {
  TempDir dir("score-weights");
  write_tree(dir / "snap", testing::injected_corpus(2, 5, 0, 1).files);
  EXPECT_NE(nbf({"score", "--input", (dir / "snap").string(), "--columns", "weighted"}).code, 0);
}

TEST(CliScore, HistoryTrainedWeights) {
  TempDir dir("score-history");
  const auto corpus = testing::injected_corpus(6, 20, 6, 9);
  write_tree(dir / "hist/2020-01-01", corpus.files);
  write_tree(dir / "snap", corpus.files);
  write_linesets(dir / "hist.jsonl", injected_records(corpus, "2020-01-01"));
  const auto weights = (dir / "w.tsv").string();
  const auto r = nbf({"score", "--input", (dir / "snap").string(), "--history-linesets",
                      (dir / "hist.jsonl").string(), "--history-root", (dir / "hist").string(),
                      "--save-weights", weights});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"weighted\""), std::string::npos);
  const auto again = nbf({"score", "--input", (dir / "snap").string(), "--bug-weights", weights});
  ASSERT_EQ(again.code, 0) << again.err;
  auto body = [](const std::string& s) { return s.substr(s.find('\n')); };
  EXPECT_EQ(body(r.out), body(again.out));
}

// Lines of a duplicated file, scored against a model that saw the copy,
// sit in the lowest entropy decile of a varied corpus.
TEST(CliScore, DuplicatedFileLandsInLowestDecile) {
  TempDir dir("score-dup");
  std::mt19937_64 rng(11);
  const char* words[] = {"alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "theta",
                         "lambda", "zeta", "rho", "tau", "phi", "chi", "psi", "eta"};
  std::vector<std::pair<std::string, std::string>> files;
  for (int f = 0; f < 20; ++f) {
    std::string text = "class Varied" + std::to_string(f) + " {\n";
    for (int l = 0; l < 30; ++l) {
      text += "  " + std::string(words[rng() % 16]) + " = " + words[rng() % 16] + "(" +
              words[rng() % 16] + ", " + std::to_string(rng() % 100) + ") + " + words[rng() % 16] + ";\n";
    }
    files.emplace_back("src/Varied" + std::to_string(f) + ".java", text + "}\n");
  }
  std::string dup = "package distinct.demo;\nclass Distinct {\n";
  for (int i = 0; i < 20; ++i) {
    const auto n = std::to_string(i);
    dup += "  value" + n + " = compute" + n + "(arg" + n + ") + " + n + ";\n";
  }
  dup += "  done = finished;\n}\n";
  // Hash bins are fixed per path; pick a copy name outside the original's bin.
  std::string copy;
  for (int i = 0;; ++i) {
    copy = "src/Copy" + std::to_string(i) + ".java";
    if (stable_path_hash(copy) % 10 != stable_path_hash("src/Original.java") % 10) break;
  }
  files.emplace_back("src/Original.java", dup);
  files.emplace_back(copy, dup);
  write_tree(dir / "snap", files);

  const auto r = nbf({"score", "--input", (dir / "snap").string(), "--format", "tsv", "--columns", "raw"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto scores = read_scores(in).scores;
  std::vector<double> all;
  for (const auto& s : scores) all.push_back(s.entropy);
  std::sort(all.begin(), all.end());
  const double decile = all[all.size() / 10];
  std::size_t copies = 0;
  for (const auto& s : scores) {
    if (s.path != copy) continue;
    ++copies;
    EXPECT_LE(s.entropy, decile) << "line " << s.line;
  }
  EXPECT_EQ(copies, 24u);
}

// ---------------------------------------------------------------- eval

struct EvalFixture {
  TempDir dir{"eval"};
  std::string scores, linesets, warnings;

  // 100 lines of A.java. Two single-line bugs at lines 3 and 7, both inside
  // a priority-1 warning over lines 1-10. Lines 50-59 outrank the bugs on
  // entropy alone.
  EvalFixture() {
    std::vector<LineScore> s;
    for (std::size_t i = 1; i <= 100; ++i) {
      LineScore l;
      l.path = "A.java";
      l.line = i;
      l.token_count = 3;
      l.entropy = i == 3 || i == 7 ? 5.0 : (i >= 50 && i < 60) ? 10.0 : i <= 10 ? 1.0 : 2.0;
      l.z = l.weighted = l.entropy;
      s.push_back(l);
    }
    std::ostringstream buf;
    write_scores(buf, s, {{"command", "test"}}, ScoreColumns::weighted, ScoreFormat::jsonl);
    scores = (dir / "scores.jsonl").string();
    write_text(scores, buf.str());
    linesets = (dir / "linesets.jsonl").string();
    write_linesets(linesets, {{"2020-01-01", "A.java", 3, LineLabel::buggy, "x"},
                              {"2020-01-01", "A.java", 7, LineLabel::buggy, "y"},
                              {"2020-01-01", "A.java", 8, LineLabel::unchanged, ""}});
    warnings = (dir / "warnings.jsonl").string();
    write_text(warnings, "{\"tool\":\"t\",\"path\":\"A.java\",\"start_line\":1,\"end_line\":10,\"priority\":1}\n");
  }
};

TEST(CliEval, MixBeatsBothComponentsOnInformativeWarnings) {
  EvalFixture f;
  const auto r = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--warnings", f.warnings});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const double mix = j["aucec5"]["mix"], nbf_only = j["aucec5"]["nbf"], sbf = j["aucec5"]["sbf_mean"];
  EXPECT_GE(mix, std::max(nbf_only, sbf) - 1e-12);
  EXPECT_NEAR(mix, 0.04, 1e-12);  // both bugs in the top two of 100 lines
  EXPECT_EQ(j["bugs"], 2);
  EXPECT_EQ(j["population"], 100);
  EXPECT_EQ(j["aucecl"]["warned_lines"], 10);
  EXPECT_TRUE(j.contains("entropy_comparison"));
  EXPECT_TRUE(j["warnings"].empty());
  const std::vector<std::string> keys{"#config", "credit",  "budget", "max_bug_lines",
                                      "seed",    "population", "bugs", "bug_lines",
                                      "aucecl",  "aucec5",  "aucec", "entropy_comparison",
                                      "warnings"};
  for (const auto& k : keys) EXPECT_TRUE(j.contains(k)) << k;
}

TEST(CliEval, ByteIdenticalAcrossRunsAndJobs) {
  EvalFixture f;
  const auto a = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--warnings", f.warnings});
  const auto b = nbf({"--jobs", "8", "eval", "--scores", f.scores, "--linesets", f.linesets,
                      "--warnings", f.warnings});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliEval, ZeroBugsReportsWarning) {
  EvalFixture f;
  write_linesets(f.linesets, {{"2020-01-01", "A.java", 8, LineLabel::unchanged, ""}});
  const auto r = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["bugs"], 0);
  EXPECT_EQ(j["aucec5"]["nbf"], 0.0);
  EXPECT_EQ(j["aucec"]["nbf"], 0.0);
  ASSERT_FALSE(j["warnings"].empty());
  EXPECT_FALSE(j.contains("entropy_comparison"));
}

TEST(CliEval, SeveralSnapshotsNeedSelection) {
  EvalFixture f;
  write_linesets(f.linesets, {{"2020-01-01", "A.java", 3, LineLabel::buggy, "x"},
                              {"2020-04-01", "A.java", 7, LineLabel::buggy, "y"}});
  const auto r = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--snapshot"), std::string::npos);
  const auto ok = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--snapshot", "2020-04-01"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(nlohmann::json::parse(ok.out)["bugs"], 1);
}

TEST(CliEval, WritesCurves) {
  EvalFixture f;
  const auto curves = f.dir / "curves";
  const auto r = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--warnings", f.warnings,
                      "--curve-dir", curves.string(), "--out", (f.dir / "summary.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  for (const char* name : {"nbf.tsv", "mix.tsv", "sbf.tsv"}) {
    const auto text = read_text(curves / name);
    EXPECT_EQ(text.rfind("# config: ", 0), 0u) << name;
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 1 + 101) << name;
  }
  EXPECT_NO_THROW(nlohmann::json::parse(read_text(f.dir / "summary.json")));
}

TEST(CliEval, ConfigFilePrecedence) {
  EvalFixture f;
  const auto config = (f.dir / "config.json").string();
  write_text(config, "{\"eval\": {\"budget\": 0.2, \"credit\": \"partial\"}}");
  const auto from_file = nbf({"--config", config, "eval", "--scores", f.scores, "--linesets", f.linesets});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  auto j = nlohmann::json::parse(from_file.out);
  EXPECT_EQ(j["budget"], 0.2);
  EXPECT_EQ(j["credit"], "partial");

  const auto flag = nbf({"--config", config, "eval", "--scores", f.scores, "--linesets", f.linesets,
                         "--budget", "0.1"});
  ASSERT_EQ(flag.code, 0) << flag.err;
  j = nlohmann::json::parse(flag.out);
  EXPECT_EQ(j["budget"], 0.1);
  EXPECT_EQ(j["credit"], "partial");

  ::setenv("NBF_CONFIG", config.c_str(), 1);
  const auto env = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets});
  ::unsetenv("NBF_CONFIG");
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(nlohmann::json::parse(env.out)["budget"], 0.2);

  const auto defaults = nbf({"eval", "--scores", f.scores, "--linesets", f.linesets});
  EXPECT_EQ(nlohmann::json::parse(defaults.out)["budget"], 0.05);
  EXPECT_EQ(nlohmann::json::parse(defaults.out)["seed"], 42);
}

TEST(CliEval, BadInputs) {
  EvalFixture f;
  EXPECT_NE(nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--budget", "0"}).code, 0);
  EXPECT_NE(nbf({"eval", "--scores", f.scores, "--linesets", f.linesets, "--credit", "some"}).code, 0);
  EXPECT_NE(nbf({"eval", "--scores", "/nonexistent", "--linesets", f.linesets}).code, 0);
  const auto bad_config = (f.dir / "bad.json").string();
  write_text(bad_config, "{not json");
  EXPECT_NE(nbf({"--config", bad_config, "eval", "--scores", f.scores, "--linesets", f.linesets}).code, 0);
}

// ---------------------------------------------------------------- sweep

struct SweepFixture {
  TempDir dir{"sweep"};
  std::string linesets, snapshots;
  SweepFixture() {
    const auto corpus = testing::injected_corpus(10, 40, 12, 6);
    snapshots = (dir / "snaps").string();
    write_tree(dir / "snaps/2020-01-01", corpus.files);
    linesets = (dir / "linesets.jsonl").string();
    write_linesets(linesets, injected_records(corpus, "2020-01-01"));
  }
};

std::vector<std::string> data_rows(const std::string& table) {
  std::vector<std::string> rows;
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);  // config
  std::getline(in, line);  // header
  while (std::getline(in, line)) rows.push_back(line);
  return rows;
}

TEST(CliSweep, SinglePairGivesOneRow) {
  SweepFixture f;
  const auto r = nbf({"sweep", "--linesets", f.linesets, "--snapshots", f.snapshots, "--orders", "2",
                      "--weights", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(r.out).size(), 1u);
}

TEST(CliSweep, InjectedLinesHavePositiveGaps) {
  SweepFixture f;
  const auto r = nbf({"sweep", "--linesets", f.linesets, "--snapshots", f.snapshots, "--orders", "2,4,6",
                      "--weights", "0.5,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) {
    std::istringstream fields(row);
    std::vector<std::string> v;
    for (std::string x; std::getline(fields, x, '\t');) v.push_back(x);
    ASSERT_EQ(v.size(), 7u);
    EXPECT_GT(std::stod(v[4]), 0.0) << row;
    EXPECT_EQ(v[5], "12");
  }
}

TEST(CliSweep, NoLabelsFails) {
  SweepFixture f;
  write_linesets(f.linesets, {{"2020-01-01", "src/Unit0.java", 1, LineLabel::unchanged, ""}});
  const auto r = nbf({"sweep", "--linesets", f.linesets, "--snapshots", f.snapshots});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("no buggy lines"), std::string::npos) << r.err;
}

// ---------------------------------------------------------------- help

TEST(CliHelp, DisclosesDefaults) {
  const auto r = nbf({"eval", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* needle : {"--seed", "42", "--budget", "0.05", "--max-bug-lines", "15", "--runs", "100"})
    EXPECT_NE(r.out.find(needle), std::string::npos) << needle;
  const auto mine = nbf({"mine", "--help"});
  EXPECT_NE(mine.out.find("30"), std::string::npos);
  const auto top = nbf({"--help"});
  EXPECT_NE(top.out.find("NBF_CONFIG"), std::string::npos);
}

TEST(CliHelp, SubcommandRequired) {
  EXPECT_NE(nbf({}).code, 0);
  EXPECT_NE(nbf({"frobnicate"}).code, 0);
}

}  // namespace
}  // namespace nbf
