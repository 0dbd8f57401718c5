#pragma once

// Helpers shared by the unit and acceptance binaries.

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nbf/lexer.hpp"

namespace nbf::testing {

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("nbf-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Statement templates that repeat heavily across files, so a model trained
// on the other files predicts them well.
inline const std::vector<std::string>& common_lines() {
  static const std::vector<std::string> lines = {
      "        int total = 0;",
      "        for (int i = 0; i < items.size(); i++) {",
      "            total += items.get(i).weight();",
      "        }",
      "        return total;",
      "        if (items.isEmpty()) {",
      "            return 0;",
      "        log.info(\"size\", items.size());",
      "        items.add(item);",
      "        count = count + 1;",
  };
  return lines;
}

// Java-like file: a class whose body cycles through common_lines().
inline std::string repetitive_file(const std::string& cls, std::size_t body_lines,
                                   std::size_t offset) {
  std::ostringstream out;
  out << "public class " << cls << " {\n";
  out << "    public int run() {\n";
  const auto& lines = common_lines();
  for (std::size_t i = 0; i < body_lines; ++i) out << lines[(i + offset) % lines.size()] << '\n';
  out << "    }\n";
  out << "}\n";
  return out.str();
}

// A line made of identifiers never used anywhere else.
inline std::string unseen_line(std::mt19937_64& rng, std::size_t id) {
  auto word = [&](const char* stem) {
    return std::string(stem) + std::to_string(id) + "x" + std::to_string(rng() % 100000);
  };
  return "        " + word("zq") + " " + word("vw") + " = " + word("kj") + "." + word("pf") + "(" +
         word("hb") + ");";
}

// Repetitive files with extra lines inserted at seeded positions. The
// inserted lines are either unseen-token lines or copies of a line that is
// already frequent; positions do not depend on that choice.
struct SyntheticCorpus {
  std::vector<std::pair<std::string, std::string>> files;  // (path, source)
  std::set<std::pair<std::string, std::size_t>> injected;  // (path, line)
};

inline SyntheticCorpus injected_corpus(std::size_t file_count, std::size_t body_lines,
                                       std::size_t injected, std::uint64_t seed,
                                       bool frequent_instead = false) {
  std::mt19937_64 rng(seed);
  std::vector<std::multiset<std::size_t>> slots(file_count);
  for (std::size_t k = 0; k < injected; ++k) slots[k % file_count].insert(rng() % body_lines);

  SyntheticCorpus corpus;
  const auto& common = common_lines();
  std::size_t next_id = 0;
  for (std::size_t f = 0; f < file_count; ++f) {
    const std::string cls = "Unit" + std::to_string(f);
    const std::string path = "src/" + cls + ".java";
    std::vector<std::string> lines{"public class " + cls + " {", "    public int run() {"};
    for (std::size_t i = 0; i < body_lines; ++i) {
      for (std::size_t n = slots[f].count(i); n > 0; --n) {
        const auto unseen = unseen_line(rng, next_id++);
        lines.push_back(frequent_instead ? common[2] : unseen);
        corpus.injected.emplace(path, lines.size());
      }
      lines.push_back(common[(i + f) % common.size()]);
    }
    lines.push_back("    }");
    lines.push_back("}");
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    corpus.files.emplace_back(path, std::move(text));
  }
  return corpus;
}

inline TokenizedFile lex_java(const std::string& source, const std::string& path) {
  return tokenize_file(source, LanguageProfile::java(), path);
}

}  // namespace nbf::testing
