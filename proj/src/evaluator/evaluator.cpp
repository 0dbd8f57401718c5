#include "nbf/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "nbf/parallel.hpp"

namespace nbf {

namespace {

std::string describe(const LineKey& key) { return key.first + ":" + std::to_string(key.second); }

// Highest covering priority per warned line.
std::map<LineKey, int> expand_warnings(std::span<const Warning> warnings) {
  std::map<LineKey, int> value;
  for (const auto& w : warnings) {
    w.validate();
    for (auto line = w.start_line; line <= w.end_line; ++line) {
      auto& v = value[{w.path, line}];
      v = std::max(v, w.priority);
    }
  }
  return value;
}

double key_value(const LineScore& s, RankKey key) {
  switch (key) {
    case RankKey::entropy: return s.entropy;
    case RankKey::z: return s.z;
    case RankKey::weighted: return s.weighted;
  }
  return s.weighted;
}

}  // namespace

void Warning::validate() const {
  if (start_line < 1 || end_line < start_line)
    throw std::invalid_argument("warning " + path + ":" + std::to_string(start_line) +
                                " has an empty line range");
  if (priority < 1)
    throw std::invalid_argument("warning " + path + ":" + std::to_string(start_line) +
                                " has non-positive priority");
}

std::string_view to_string(CreditMode mode) { return mode == CreditMode::full ? "full" : "partial"; }

std::optional<CreditMode> parse_credit_mode(std::string_view name) {
  if (name == "full") return CreditMode::full;
  if (name == "partial") return CreditMode::partial;
  return std::nullopt;
}

std::string_view to_string(RankKey key) {
  switch (key) {
    case RankKey::entropy: return "entropy";
    case RankKey::z: return "z";
    case RankKey::weighted: return "weighted";
  }
  return "weighted";
}

std::optional<RankKey> parse_rank_key(std::string_view name) {
  for (auto k : {RankKey::entropy, RankKey::z, RankKey::weighted})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

EvalCurve lift_curve(std::span<const LineKey> ordering, const BugMap& bugs, CreditMode credit) {
  if (ordering.empty()) throw std::invalid_argument("empty line population");
  const double n = static_cast<double>(ordering.size());

  // Credit each line carries, and for full credit the bugs it may complete.
  std::map<LineKey, std::vector<std::size_t>> owners;
  std::vector<double> share;
  for (const auto& [id, lines] : bugs) {
    const auto bug = share.size();
    share.push_back(1.0 / static_cast<double>(lines.size()));
    for (const auto& l : lines) owners[l].push_back(bug);
  }
  std::size_t seen = 0;
  for (const auto& l : ordering)
    if (owners.count(l)) ++seen;
  if (seen != owners.size()) {
    std::set<LineKey> population(ordering.begin(), ordering.end());
    for (const auto& [l, b] : owners)
      if (!population.count(l)) throw std::invalid_argument("bug line outside population: " + describe(l));
  }

  EvalCurve curve;
  curve.points.reserve(ordering.size() + 1);
  curve.points.emplace_back(0.0, 0.0);
  const double bug_count = static_cast<double>(share.size());
  std::vector<char> credited(share.size(), 0);
  double touched = 0.0;  // bugs with at least one inspected line
  double earned = 0.0;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    if (const auto it = owners.find(ordering[i]); it != owners.end()) {
      for (auto bug : it->second) {
        if (!credited[bug]) {
          credited[bug] = 1;
          touched += 1.0;
        }
        earned += share[bug];
      }
      // Summed shares can round past the exact bound of one point per
      // touched bug.
      earned = credit == CreditMode::partial ? std::min(earned, touched) : touched;
    }
    const double y = bug_count > 0 ? std::min(1.0, earned / bug_count) : 0.0;
    curve.points.emplace_back(static_cast<double>(i + 1) / n, y);
  }
  return curve;
}

double aucec(const EvalCurve& curve, double budget) {
  if (!(budget > 0.0 && budget <= 1.0)) throw std::invalid_argument("budget must be in (0, 1]");
  double area = 0.0;
  const auto& p = curve.points;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const auto [x0, y0] = p[i - 1];
    const auto [x1, y1] = p[i];
    if (x0 >= budget) break;
    if (x1 <= budget) {
      area += 0.5 * (x1 - x0) * (y0 + y1);
    } else {
      const double y = y0 + (y1 - y0) * (budget - x0) / (x1 - x0);
      area += 0.5 * (budget - x0) * (y0 + y);
      break;
    }
  }
  return area;
}

std::vector<LineKey> simulate_sbf_order(std::span<const Warning> warnings,
                                        std::span<const LineKey> population, std::uint64_t seed) {
  const auto warned = expand_warnings(warnings);
  std::vector<LineKey> lines(population.begin(), population.end());
  std::sort(lines.begin(), lines.end());

  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, std::size_t>> value(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = warned.find(lines[i]);
    value[i] = {(it == warned.end() ? 0.0 : static_cast<double>(it->second)) + u, i};
  }
  std::sort(value.begin(), value.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<LineKey> out;
  out.reserve(lines.size());
  for (const auto& [v, i] : value) out.push_back(lines[i]);
  return out;
}

std::vector<LineKey> rank_lines(std::span<const LineScore> scores, RankKey key) {
  std::vector<const LineScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  std::sort(order.begin(), order.end(), [key](const LineScore* a, const LineScore* b) {
    const double va = key_value(*a, key), vb = key_value(*b, key);
    if (va != vb) return va > vb;
    return std::tie(a->path, a->line) < std::tie(b->path, b->line);
  });
  std::vector<LineKey> out;
  out.reserve(order.size());
  for (const auto* s : order) out.emplace_back(s->path, s->line);
  return out;
}

std::vector<LineKey> mix_order(std::span<const Warning> warnings, std::span<const LineScore> scores,
                               RankKey key) {
  std::map<LineKey, const LineScore*> by_line;
  for (const auto& s : scores) by_line[{s.path, s.line}] = &s;
  for (const auto& w : warnings) {
    w.validate();
    bool covered = false;
    for (auto line = w.start_line; line <= w.end_line && !covered; ++line)
      covered = by_line.count({w.path, line}) > 0;
    if (!covered)
      throw std::invalid_argument("warned line lacks a score: " + w.path + ":" +
                                  std::to_string(w.start_line));
  }
  const auto warned = expand_warnings(warnings);

  struct Entry {
    int priority;
    double value;
    const LineScore* score;
  };
  std::vector<Entry> entries;
  entries.reserve(by_line.size());
  for (const auto& [k, s] : by_line) {
    const auto it = warned.find(k);
    entries.push_back({it == warned.end() ? 0 : it->second, key_value(*s, key), s});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.score->path, a.score->line) < std::tie(b.score->path, b.score->line);
  });
  std::vector<LineKey> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.emplace_back(e.score->path, e.score->line);
  return out;
}

std::size_t warned_line_count(std::span<const Warning> warnings,
                              std::span<const LineKey> population) {
  const auto warned = expand_warnings(warnings);
  std::size_t n = 0;
  for (const auto& l : population)
    if (warned.count(l)) ++n;
  return n;
}

AucecPair aucecl(std::span<const LineKey> sbf_ordering, std::span<const LineKey> nbf_ordering,
                 std::size_t warned_lines, const BugMap& bugs, CreditMode credit) {
  if (warned_lines == 0) throw std::invalid_argument("no warned lines");
  if (sbf_ordering.size() != nbf_ordering.size())
    throw std::invalid_argument("orderings cover different populations");
  if (warned_lines > sbf_ordering.size())
    throw std::invalid_argument("more warned lines than population lines");
  AucecPair out;
  out.budget = static_cast<double>(warned_lines) / static_cast<double>(sbf_ordering.size());
  out.sbf = aucec(lift_curve(sbf_ordering, bugs, credit), out.budget);
  out.nbf = aucec(lift_curve(nbf_ordering, bugs, credit), out.budget);
  return out;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t runs) {
  std::vector<std::uint64_t> seeds(runs);
  std::uint64_t state = master_seed;
  for (auto& s : seeds) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    s = z ^ (z >> 31);
  }
  return seeds;
}

MonteCarloResult simulate_sbf_aucec(std::span<const Warning> warnings,
                                    std::span<const LineKey> population, const BugMap& bugs,
                                    CreditMode credit, double budget, std::size_t runs,
                                    std::uint64_t master_seed, std::size_t jobs) {
  if (runs == 0) throw std::invalid_argument("need at least one simulation run");
  const auto seeds = derive_seeds(master_seed, runs);
  std::vector<double> areas(runs);
  parallel_for(runs, jobs, [&](std::size_t r) {
    const auto order = simulate_sbf_order(warnings, population, seeds[r]);
    areas[r] = aucec(lift_curve(order, bugs, credit), budget);
  });
  MonteCarloResult out;
  out.runs = runs;
  for (double a : areas) out.mean += a;
  out.mean /= static_cast<double>(runs);
  if (runs > 1) {
    double ss = 0.0;
    for (double a : areas) ss += (a - out.mean) * (a - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(runs - 1));
  }
  return out;
}

BugMap filter_bugs(const BugMap& bugs, std::span<const LineKey> population,
                   std::size_t max_bug_lines) {
  const std::set<LineKey> in_population(population.begin(), population.end());
  BugMap out;
  for (const auto& [id, lines] : bugs) {
    if (max_bug_lines > 0 && lines.size() >= max_bug_lines) continue;
    std::set<LineKey> kept;
    for (const auto& l : lines)
      if (in_population.count(l)) kept.insert(l);
    if (!kept.empty()) out.emplace(id, std::move(kept));
  }
  return out;
}

}  // namespace nbf
