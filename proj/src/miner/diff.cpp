#include "nbf/diff.hpp"

#include <unordered_map>

namespace nbf {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

namespace {

// Marks matched positions of a[lo..hi) and b[lo..hi) in keep_a / keep_b.
class Myers {
 public:
  Myers(const std::vector<int>& a, const std::vector<int>& b, std::vector<char>& keep_a,
        std::vector<char>& keep_b)
      : a_(a), b_(b), keep_a_(keep_a), keep_b_(keep_b) {}

  void run(long a0, long a1, long b0, long b1) {
    while (a0 < a1 && b0 < b1 && a_[a0] == b_[b0]) {
      keep_a_[a0++] = 1;
      keep_b_[b0++] = 1;
    }
    while (a0 < a1 && b0 < b1 && a_[a1 - 1] == b_[b1 - 1]) {
      keep_a_[--a1] = 1;
      keep_b_[--b1] = 1;
    }
    if (a0 == a1 || b0 == b1) return;
    bisect(a0, a1, b0, b1);
  }

 private:
  // Finds a point on an optimal path and recurses on both halves.
  void bisect(long a0, long a1, long b0, long b1) {
    const long n = a1 - a0;
    const long m = b1 - b0;
    const long max_d = (n + m + 1) / 2;
    const long offset = max_d;
    const long width = 2 * max_d + 2;
    std::vector<long> v1(width, -1), v2(width, -1);
    v1[offset + 1] = 0;
    v2[offset + 1] = 0;
    const long delta = n - m;
    const bool front = (delta % 2) != 0;
    long k1start = 0, k1end = 0, k2start = 0, k2end = 0;

    for (long d = 0; d < max_d; ++d) {
      for (long k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const long k1o = offset + k1;
        long x1 = (k1 == -d || (k1 != d && v1[k1o - 1] < v1[k1o + 1])) ? v1[k1o + 1]
                                                                       : v1[k1o - 1] + 1;
        long y1 = x1 - k1;
        while (x1 < n && y1 < m && a_[a0 + x1] == b_[b0 + y1]) {
          ++x1;
          ++y1;
        }
        v1[k1o] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const long k2o = offset + delta - k1;
          if (k2o >= 0 && k2o < width && v2[k2o] != -1 && x1 >= n - v2[k2o]) {
            split(a0, a1, b0, b1, x1, y1);
            return;
          }
        }
      }
      for (long k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const long k2o = offset + k2;
        long x2 = (k2 == -d || (k2 != d && v2[k2o - 1] < v2[k2o + 1])) ? v2[k2o + 1]
                                                                       : v2[k2o - 1] + 1;
        long y2 = x2 - k2;
        while (x2 < n && y2 < m && a_[a0 + n - x2 - 1] == b_[b0 + m - y2 - 1]) {
          ++x2;
          ++y2;
        }
        v2[k2o] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const long k1o = offset + delta - k2;
          if (k1o >= 0 && k1o < width && v1[k1o] != -1) {
            const long x1 = v1[k1o];
            const long y1 = offset + x1 - k1o;
            if (x1 >= n - x2) {
              split(a0, a1, b0, b1, x1, y1);
              return;
            }
          }
        }
      }
    }
    // No common line at all: everything is replaced.
  }

  void split(long a0, long a1, long b0, long b1, long x, long y) {
    run(a0, a0 + x, b0, b0 + y);
    run(a0 + x, a1, b0 + y, b1);
  }

  const std::vector<int>& a_;
  const std::vector<int>& b_;
  std::vector<char>& keep_a_;
  std::vector<char>& keep_b_;
};

// Moves each run of changed lines as far down as equal lines allow, the
// placement `git diff` reports among equally short scripts. The kept
// content sequence does not change.
void slide_down(const std::vector<int>& ids, std::vector<char>& keep) {
  const std::size_t n = ids.size();
  std::size_t s = 0;
  while (s < n) {
    if (keep[s]) {
      ++s;
      continue;
    }
    std::size_t e = s;
    while (e < n && !keep[e]) ++e;
    while (e < n && ids[s] == ids[e]) {
      keep[s++] = 1;
      keep[e++] = 0;
      while (e < n && !keep[e]) ++e;  // absorb a run we slid into
    }
    s = e;
  }
}

}  // namespace

LineDiff diff_lines(const std::vector<std::string>& old_lines,
                    const std::vector<std::string>& new_lines) {
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](const std::vector<std::string>& lines) {
    std::vector<int> out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back(ids.emplace(l, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const auto a = intern(old_lines);
  const auto b = intern(new_lines);
  std::vector<char> keep_a(a.size(), 0), keep_b(b.size(), 0);
  Myers(a, b, keep_a, keep_b).run(0, static_cast<long>(a.size()), 0, static_cast<long>(b.size()));
  slide_down(a, keep_a);
  slide_down(b, keep_b);

  LineDiff diff;
  diff.old_to_new.assign(a.size(), 0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!keep_a[i]) {
      diff.deleted.push_back(i + 1);
      continue;
    }
    while (!keep_b[j]) ++j;
    diff.old_to_new[i] = ++j;
  }
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!keep_b[i]) diff.added.push_back(i + 1);
  return diff;
}

LineDiff diff_versions(std::string_view old_text, std::string_view new_text) {
  return diff_lines(split_lines(old_text), split_lines(new_text));
}

}  // namespace nbf
