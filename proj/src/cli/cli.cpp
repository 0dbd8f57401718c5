#include "nbf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbf/evaluator.hpp"
#include "nbf/lexer.hpp"
#include "nbf/miner.hpp"
#include "nbf/normalizer.hpp"
#include "nbf/records.hpp"
#include "nbf/scorer.hpp"

#ifndef NBF_PROFILE_DIR
#define NBF_PROFILE_DIR "profiles"
#endif

namespace nbf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kConfigEnv = "NBF_CONFIG";

// JSON config files: top-level keys are root options (`jobs`), nested
// objects hold one subcommand's options, e.g. {"score": {"gamma": 2}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        j[name] = r.size() == 1 ? json(r.front()) : json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      const auto nested = json::parse(to_config(sub, default_also, false, ""));
      if (!nested.empty()) j[sub->get_name()] = nested;
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  static void collect(const json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto nested = parents;
        nested.push_back(it.key());
        collect(*it, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
  }
};

struct RootOptions {
  std::size_t jobs = 1;
};

struct ModelOptions {
  std::string profile = "java";
  std::size_t bins = 10;
  std::size_t order = 3;
  std::size_t max_cache_order = 10;
  std::size_t min_backoff_order = 4;
  double backoff_weight = 1.0;
  double gamma = 1.0;
  bool no_epilog = false;
};

struct MineOptions {
  std::string commits;
  std::string snapshots;
  std::string out = "-";
  std::string profile = "java";
  std::string start;
  std::size_t interval_days = 91;
  std::size_t max_delete = kDefaultMaxDelete;
};

struct ScoreOptions {
  ModelOptions model;
  std::string input;
  std::string out = "-";
  std::string format = "jsonl";
  std::string columns;
  std::string bug_weights;
  std::string history_linesets;
  std::string history_root;
  std::string history_before;
  std::string save_weights;
};

struct EvalOptions {
  std::string scores;
  std::string linesets;
  std::string snapshot;
  std::string warnings;
  std::string out = "-";
  std::string curve_dir;
  std::string credit = "full";
  std::string rank_by = "weighted";
  double budget = 0.05;
  std::size_t max_bug_lines = 15;
  std::uint64_t seed = 42;
  std::size_t runs = kDefaultMonteCarloRuns;
  std::size_t bootstrap = 1000;
};

struct SweepOptions {
  ModelOptions model;
  std::string linesets;
  std::string snapshots;
  std::string out = "-";
  std::vector<std::size_t> orders{2, 3, 4, 5, 6};
  std::vector<double> weights{0.25, 0.5, 1.0};
};

void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--profile", m.profile, "Language profile: a bundled name or a profile file")
      ->capture_default_str();
  cmd->add_option("--bins", m.bins, "Leave-one-bin-out training bins")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  cmd->add_option("--order", m.order, "Global n-gram order")
      ->check(CLI::Range(std::size_t{1}, std::size_t{16}))
      ->capture_default_str();
  cmd->add_option("--max-cache-order", m.max_cache_order, "Longest cache n-gram")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--min-backoff-order", m.min_backoff_order, "Shortest cache n-gram consulted")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--backoff-weight", m.backoff_weight, "Multiplier per backoff step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--gamma", m.gamma, "Cache concentration parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--no-epilog", m.no_epilog, "Score tokens from the prolog only");
}

ScoringOptions scoring_options(const ModelOptions& m, std::size_t jobs) {
  ScoringOptions o;
  o.cache.max_cache_order = m.max_cache_order;
  o.cache.min_backoff_order = m.min_backoff_order;
  o.cache.backoff_weight = m.backoff_weight;
  o.cache.gamma = m.gamma;
  o.global_order = m.order;
  o.use_epilog = !m.no_epilog;
  o.jobs = jobs;
  o.validate();
  return o;
}

ordered_json model_config(const ModelOptions& m, const LanguageProfile& profile) {
  return {{"profile", profile.name},
          {"bins", m.bins},
          {"order", m.order},
          {"max_cache_order", m.max_cache_order},
          {"min_backoff_order", m.min_backoff_order},
          {"backoff_weight", m.backoff_weight},
          {"gamma", m.gamma},
          {"epilog", !m.no_epilog}};
}

LanguageProfile resolve_profile(const std::string& name) {
  if (fs::is_regular_file(name)) return load_profile(name);
  const auto bundled = fs::path(NBF_PROFILE_DIR) / (name + ".json");
  if (fs::is_regular_file(bundled)) return load_profile(bundled);
  if (name == "java") return LanguageProfile::java();
  throw std::runtime_error("language profile not found: " + name);
}

// Opens `path` for writing, or returns `fallback` for "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path == "-") return;
    if (const auto parent = fs::path(path).parent_path(); !parent.empty())
      fs::create_directories(parent);
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::vector<TokenizedFile> lex_tree(const fs::path& root, const LanguageProfile& profile,
                                    std::ostream& err) {
  std::vector<TokenizedFile> files;
  for (const auto& [path, text] : read_snapshot_tree(root, profile.extensions)) {
    files.push_back(tokenize_file(text, profile, path));
    for (const auto& d : files.back().diagnostics) err << "warning: " << d.to_string() << '\n';
  }
  return files;
}

std::vector<LineRecord> load_linesets(const std::string& path) {
  auto in = open_input(path);
  return read_line_records(in);
}

// ---------------------------------------------------------------- mine

int cmd_mine(const MineOptions& o, std::ostream& out, std::ostream& err) {
  const auto profile = resolve_profile(o.profile);
  if (o.interval_days == 0) throw std::invalid_argument("--interval-days must be positive");
  auto history = load_commit_manifest(o.commits);
  for (auto& c : history) {
    std::erase_if(c.file_changes,
                  [&](const FileChange& f) { return !profile.has_extension(f.path); });
  }

  const Instant start = !o.start.empty() ? parse_instant(o.start)
                        : history.empty() ? 0
                                          : floor_to_day(history.front().timestamp);
  const auto boundaries =
      extract_snapshots(history, static_cast<Instant>(o.interval_days) * kSecondsPerDay, start);

  std::vector<LineRecord> records;
  for (const auto& b : boundaries) {
    const auto date = format_date(b.start);
    const auto dir = fs::path(o.snapshots) / date;
    if (!fs::is_directory(dir)) {
      if (b.commits.empty()) continue;
      throw std::runtime_error("missing snapshot directory " + dir.string());
    }
    std::vector<CommitRecord> interval;
    for (auto i : b.commits) interval.push_back(history[i]);
    const auto sets = build_line_sets(read_snapshot_tree(dir, profile.extensions), interval, o.max_delete);
    for (const auto& [commit, path] : sets.filtered)
      err << "note: " << date << ": commit " << commit << " on " << path
          << " skipped by the deleted-line filter\n";
    auto part = sets.records(date);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }

  ordered_json config{{"command", "mine"},
                      {"version", kVersion},
                      {"profile", profile.name},
                      {"start", history.empty() ? std::string() : format_date(start)},
                      {"interval_days", o.interval_days},
                      {"max_delete", o.max_delete}};
  Output sink(o.out, out);
  write_line_records(sink.stream(), records, config);
  sink.close();
  return 0;
}

// ---------------------------------------------------------------- score

BugWeightTable weights_from_history(const ScoreOptions& o, const LanguageProfile& profile,
                                    std::ostream& err) {
  if (o.history_root.empty()) throw std::invalid_argument("--history-linesets needs --history-root");
  const auto records = load_linesets(o.history_linesets);
  std::map<std::string, std::set<LineKey>> buggy;
  std::set<std::string> snapshots;
  for (const auto& r : records) {
    if (!o.history_before.empty() && r.snapshot >= o.history_before) continue;
    snapshots.insert(r.snapshot);
    if (r.label == LineLabel::buggy) buggy[r.snapshot].emplace(r.path, r.line);
  }
  if (snapshots.empty()) throw std::invalid_argument("no training snapshots in the history");

  std::vector<LabeledLine> history;
  for (const auto& snap : snapshots) {
    const auto& bugs = buggy[snap];
    for (const auto& f : lex_tree(fs::path(o.history_root) / snap, profile, err))
      for (const auto& [line, type] : f.line_types)
        history.push_back({type, bugs.count({f.path, line}) > 0});
  }
  return train_bug_weights(history, *snapshots.begin() + ".." + *snapshots.rbegin());
}

int cmd_score(const ScoreOptions& o, std::size_t jobs, std::ostream& out, std::ostream& err) {
  const auto profile = resolve_profile(o.model.profile);
  const auto options = scoring_options(o.model, jobs);
  if (!o.bug_weights.empty() && !o.history_linesets.empty())
    throw std::invalid_argument("--bug-weights and --history-linesets are exclusive");

  std::optional<BugWeightTable> weights;
  if (!o.bug_weights.empty()) {
    auto in = open_input(o.bug_weights);
    weights = BugWeightTable::read(in);
  } else if (!o.history_linesets.empty()) {
    weights = weights_from_history(o, profile, err);
  }
  if (!o.save_weights.empty()) {
    if (!weights) throw std::invalid_argument("--save-weights needs bug weights to save");
    Output sink(o.save_weights, out);
    weights->write(sink.stream());
    sink.close();
  }

  ScoreColumns columns = weights ? ScoreColumns::weighted : ScoreColumns::type;
  if (o.columns == "raw") columns = ScoreColumns::raw;
  else if (o.columns == "type") columns = ScoreColumns::type;
  else if (o.columns == "weighted") columns = ScoreColumns::weighted;
  else if (!o.columns.empty()) throw std::invalid_argument("unknown --columns " + o.columns);
  if (columns == ScoreColumns::weighted && !weights)
    throw std::invalid_argument("--columns weighted needs --bug-weights or --history-linesets");
  const auto format = o.format == "tsv" ? ScoreFormat::tsv : ScoreFormat::jsonl;

  const auto files = lex_tree(o.input, profile, err);
  std::vector<std::string> paths;
  for (const auto& f : files) paths.push_back(f.path);
  auto scores = score_snapshot(files, options, partition_bins(paths, o.model.bins));
  normalize_scores(scores, columns == ScoreColumns::weighted ? &*weights : nullptr);

  auto config = model_config(o.model, profile);
  config["command"] = "score";
  config["version"] = kVersion;
  config["columns"] = columns == ScoreColumns::raw    ? "raw"
                      : columns == ScoreColumns::type ? "type"
                                                      : "weighted";
  if (columns == ScoreColumns::weighted) config["bug_weights_training"] = weights->training_range;

  Output sink(o.out, out);
  write_scores(sink.stream(), scores, config, columns, format);
  sink.close();
  return 0;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const EvalOptions& o, std::size_t jobs, std::ostream& out, std::ostream& err) {
  const auto credit = parse_credit_mode(o.credit);
  if (!credit) throw std::invalid_argument("--credit must be full or partial");
  const auto rank_key = parse_rank_key(o.rank_by);
  if (!rank_key) throw std::invalid_argument("--rank-by must be entropy, z or weighted");
  if (!(o.budget > 0.0 && o.budget <= 1.0)) throw std::invalid_argument("--budget must be in (0, 1]");

  ScoreFile scored;
  {
    auto in = open_input(o.scores);
    scored = read_scores(in);
  }
  if ((*rank_key == RankKey::weighted && !scored.has_weighted) ||
      (*rank_key == RankKey::z && !scored.has_z))
    throw std::invalid_argument("scores file has no '" + o.rank_by + "' column");
  if (scored.scores.empty()) throw std::invalid_argument("scores file holds no lines");

  const auto records = load_linesets(o.linesets);
  std::string snapshot = o.snapshot;
  if (snapshot.empty()) {
    std::set<std::string> snaps;
    for (const auto& r : records) snaps.insert(r.snapshot);
    if (snaps.size() > 1) throw std::invalid_argument("linesets hold several snapshots; pass --snapshot");
    if (!snaps.empty()) snapshot = *snaps.begin();
  }

  std::vector<LineKey> population;
  for (const auto& s : scored.scores) population.emplace_back(s.path, s.line);
  std::sort(population.begin(), population.end());
  const auto bugs = filter_bugs(bugs_from_records(records, snapshot), population, o.max_bug_lines);

  std::vector<Warning> warnings;
  if (!o.warnings.empty()) {
    auto in = open_input(o.warnings);
    warnings = read_warnings(in);
  }

  ordered_json summary;
  summary["#config"] = {{"command", "eval"},
                        {"version", kVersion},
                        {"snapshot", snapshot},
                        {"credit", o.credit},
                        {"rank_by", o.rank_by},
                        {"budget", o.budget},
                        {"max_bug_lines", o.max_bug_lines},
                        {"seed", o.seed},
                        {"runs", o.runs},
                        {"bootstrap", o.bootstrap},
                        {"with_warnings", !o.warnings.empty()}};
  summary["credit"] = o.credit;
  summary["budget"] = o.budget;
  summary["max_bug_lines"] = o.max_bug_lines;
  summary["seed"] = o.seed;
  summary["population"] = population.size();
  summary["bugs"] = bugs.size();
  std::set<LineKey> bug_lines;
  for (const auto& [id, lines] : bugs) bug_lines.insert(lines.begin(), lines.end());
  summary["bug_lines"] = bug_lines.size();
  ordered_json notes = json::array();
  if (bugs.empty()) notes.push_back("no bugs in the evaluation population; scores are zero");

  const auto nbf_order = rank_lines(scored.scores, *rank_key);
  const auto nbf_curve = lift_curve(nbf_order, bugs, *credit);
  ordered_json aucec5{{"nbf", aucec(nbf_curve, 0.05)}};
  ordered_json at_budget{{"nbf", aucec(nbf_curve, o.budget)}};

  std::optional<EvalCurve> mix_curve, sbf_curve;
  if (!warnings.empty()) {
    const auto mixed = mix_order(warnings, scored.scores, *rank_key);
    mix_curve = lift_curve(mixed, bugs, *credit);
    sbf_curve = lift_curve(simulate_sbf_order(warnings, population, derive_seeds(o.seed, 1).front()),
                           bugs, *credit);
    auto simulate = [&](double budget) {
      return simulate_sbf_aucec(warnings, population, bugs, *credit, budget, o.runs, o.seed, jobs);
    };
    const auto sbf5 = simulate(0.05);
    aucec5["sbf_mean"] = sbf5.mean;
    aucec5["sbf_sd"] = sbf5.sd;
    aucec5["mix"] = aucec(*mix_curve, 0.05);
    const auto sbf_b = simulate(o.budget);
    at_budget["sbf_mean"] = sbf_b.mean;
    at_budget["sbf_sd"] = sbf_b.sd;
    at_budget["mix"] = aucec(*mix_curve, o.budget);

    const auto warned = warned_line_count(warnings, population);
    if (warned == 0) {
      notes.push_back("no warned line is in the population; aucecl skipped");
    } else {
      const double budget = static_cast<double>(warned) / static_cast<double>(population.size());
      const auto sbf_l = simulate(budget);
      summary["aucecl"] = {{"warned_lines", warned},
                           {"budget", budget},
                           {"nbf", aucec(nbf_curve, budget)},
                           {"sbf_mean", sbf_l.mean},
                           {"sbf_sd", sbf_l.sd},
                           {"mix", aucec(*mix_curve, budget)}};
    }
  }
  summary["aucec5"] = aucec5;
  summary["aucec"] = at_budget;

  if (!bugs.empty()) {
    std::vector<double> buggy, other;
    for (const auto& s : scored.scores)
      (bug_lines.count({s.path, s.line}) ? buggy : other).push_back(s.entropy);
    try {
      const auto cmp = compare_entropy_distributions(buggy, other, o.bootstrap, o.seed);
      summary["entropy_comparison"] = {{"buggy_lines", buggy.size()},
                                       {"other_lines", other.size()},
                                       {"mean_diff", cmp.mean_diff},
                                       {"ci_low", cmp.ci_low},
                                       {"ci_high", cmp.ci_high},
                                       {"cohens_d", cmp.cohens_d}};
    } catch (const std::invalid_argument& e) {
      notes.push_back(std::string("entropy comparison skipped: ") + e.what());
    }
  }
  summary["warnings"] = notes;

  if (!o.curve_dir.empty()) {
    auto write = [&](const char* name, const EvalCurve& c) {
      Output sink((fs::path(o.curve_dir) / name).string(), out);
      write_curve(sink.stream(), c, summary["#config"]);
      sink.close();
    };
    write("nbf.tsv", nbf_curve);
    if (mix_curve) write("mix.tsv", *mix_curve);
    if (sbf_curve) write("sbf.tsv", *sbf_curve);
  }

  for (const auto& n : notes) err << "note: " << n.get<std::string>() << '\n';
  Output sink(o.out, out);
  sink.stream() << summary.dump(2) << '\n';
  sink.close();
  return 0;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const SweepOptions& o, std::size_t jobs, std::ostream& out, std::ostream& err) {
  const auto profile = resolve_profile(o.model.profile);
  const auto base = scoring_options(o.model, jobs);
  if (o.orders.empty() || o.weights.empty())
    throw std::invalid_argument("--orders and --weights need at least one value");

  std::map<std::string, std::set<LineKey>> buggy;
  for (const auto& r : load_linesets(o.linesets))
    if (r.label == LineLabel::buggy) buggy[r.snapshot].emplace(r.path, r.line);
  if (buggy.empty()) throw std::invalid_argument("linesets hold no buggy lines");

  std::vector<LabeledSnapshot> corpus;
  for (auto& [snap, lines] : buggy) {
    LabeledSnapshot s;
    s.files = lex_tree(fs::path(o.snapshots) / snap, profile, err);
    s.buggy = std::move(lines);
    corpus.push_back(std::move(s));
  }
  const auto rows = sweep_cache_params(corpus, o.orders, o.weights, base, o.model.bins);

  auto config = model_config(o.model, profile);
  config["command"] = "sweep";
  config["version"] = kVersion;
  config["orders"] = o.orders;
  config["weights"] = o.weights;
  Output sink(o.out, out);
  auto& s = sink.stream();
  s << "# config: " << config.dump() << '\n';
  s << "min_backoff_order\tbackoff_weight\tbuggy_mean\tother_mean\tgap\tbuggy_lines\tother_lines\n";
  for (const auto& r : rows) {
    s << r.min_backoff_order << '\t' << json(r.backoff_weight).dump() << '\t'
      << json(r.buggy_mean).dump() << '\t' << json(r.other_mean).dump() << '\t'
      << json(r.gap).dump() << '\t' << r.buggy_lines << '\t' << r.other_lines << '\n';
  }
  sink.close();
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy-based line ranking for defect localization"};
  app.name(args.empty() ? "nbf" : fs::path(args.front()).filename().string());
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file (flags override it)")
      ->envname(kConfigEnv);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RootOptions root;
  app.add_option("--jobs,-j", root.jobs, "Worker threads")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
      ->capture_default_str();

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "Label buggy, fixed and unchanged lines from history");
  mine_cmd->add_option("--commits", mine.commits, "commits.jsonl manifest")->required();
  mine_cmd->add_option("--snapshots", mine.snapshots, "Directory of <YYYY-MM-DD>/ snapshot trees")
      ->required();
  mine_cmd->add_option("--out,-o", mine.out, "linesets.jsonl output ('-' for stdout)")
      ->capture_default_str();
  mine_cmd->add_option("--profile", mine.profile, "Language profile selecting source files")
      ->capture_default_str();
  mine_cmd->add_option("--start", mine.start,
                       "First boundary (date or timestamp; default: day of the first commit)");
  mine_cmd->add_option("--interval-days", mine.interval_days, "Days between snapshots")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mine_cmd->add_option("--max-delete", mine.max_delete,
                       "Keep per-file commits deleting at most this many lines (presets: 2,5,10,20,30)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score every line of a snapshot");
  score_cmd->add_option("--input,-i", score.input, "Snapshot directory")->required();
  score_cmd->add_option("--out,-o", score.out, "Score output ('-' for stdout)")->capture_default_str();
  score_cmd->add_option("--format", score.format, "jsonl or tsv")
      ->check(CLI::IsMember({"jsonl", "tsv"}))
      ->capture_default_str();
  score_cmd->add_option("--columns", score.columns,
                        "raw (entropy), type (z) or weighted (z * type weight); default: "
                        "weighted when bug weights are given, else type")
      ->check(CLI::IsMember({"raw", "type", "weighted"}));
  score_cmd->add_option("--bug-weights", score.bug_weights, "Saved bug weight table");
  score_cmd->add_option("--history-linesets", score.history_linesets,
                        "Train bug weights from these labeled snapshots");
  score_cmd->add_option("--history-root", score.history_root,
                        "Directory of <YYYY-MM-DD>/ trees for --history-linesets");
  score_cmd->add_option("--history-before", score.history_before,
                        "Only train on snapshots dated before this (YYYY-MM-DD)");
  score_cmd->add_option("--save-weights", score.save_weights, "Write the bug weight table used");
  add_model_options(score_cmd, score.model);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Cost-effectiveness of line orderings");
  eval_cmd->add_option("--scores", eval.scores, "Line scores (jsonl or tsv)")->required();
  eval_cmd->add_option("--linesets", eval.linesets, "linesets.jsonl with buggy lines")->required();
  eval_cmd->add_option("--snapshot", eval.snapshot, "Snapshot date the scores belong to");
  eval_cmd->add_option("--warnings", eval.warnings, "Static bug finder warnings (jsonl)");
  eval_cmd->add_option("--out,-o", eval.out, "Summary JSON output ('-' for stdout)")
      ->capture_default_str();
  eval_cmd->add_option("--curve-dir", eval.curve_dir, "Write lift curves (x<TAB>y) here");
  eval_cmd->add_option("--credit", eval.credit, "full or partial")
      ->check(CLI::IsMember({"full", "partial"}))
      ->capture_default_str();
  eval_cmd->add_option("--rank-by", eval.rank_by, "entropy, z or weighted")
      ->check(CLI::IsMember({"entropy", "z", "weighted"}))
      ->capture_default_str();
  eval_cmd->add_option("--budget", eval.budget, "Fraction of lines inspected")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval_cmd->add_option("--max-bug-lines", eval.max_bug_lines,
                       "Drop bugs with at least this many lines (0: keep all)")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Seed for simulation and bootstrap")->capture_default_str();
  eval_cmd->add_option("--runs", eval.runs, "Simulated static bug finder orderings")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--bootstrap", eval.bootstrap, "Bootstrap resamples for the entropy CI")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tune cache parameters on labeled snapshots");
  sweep_cmd->add_option("--linesets", sweep.linesets, "linesets.jsonl with buggy lines")->required();
  sweep_cmd->add_option("--snapshots", sweep.snapshots, "Directory of <YYYY-MM-DD>/ snapshot trees")
      ->required();
  sweep_cmd->add_option("--out,-o", sweep.out, "Table output ('-' for stdout)")->capture_default_str();
  sweep_cmd->add_option("--orders", sweep.orders, "Minimum backoff orders to try")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--weights", sweep.weights, "Backoff weights to try")
      ->delimiter(',')
      ->capture_default_str();
  add_model_options(sweep_cmd, sweep.model);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto* active = app.get_subcommands().front();
  try {
    if (active == mine_cmd) return cmd_mine(mine, out, err);
    if (active == score_cmd) return cmd_score(score, root.jobs, out, err);
    if (active == eval_cmd) return cmd_eval(eval, root.jobs, out, err);
    return cmd_sweep(sweep, root.jobs, out, err);
  } catch (const std::exception& e) {
    err << app.get_name() << ' ' << active->get_name() << ": error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace nbf::cli
