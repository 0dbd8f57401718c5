#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nbf/evaluator.hpp"

namespace nbf {

namespace {

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sum_squares(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s;
}

// Linear interpolation between closest ranks of a sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

DistributionComparison compare_entropy_distributions(std::span<const double> buggy,
                                                     std::span<const double> other,
                                                     std::size_t bootstrap_samples,
                                                     std::uint64_t seed) {
  if (buggy.size() < 2 || other.size() < 2)
    throw std::invalid_argument("each sample needs at least two values");
  if (bootstrap_samples == 0) throw std::invalid_argument("need at least one bootstrap sample");

  const double mb = mean_of(buggy);
  const double mo = mean_of(other);
  const double pooled_var = (sum_squares(buggy, mb) + sum_squares(other, mo)) /
                            static_cast<double>(buggy.size() + other.size() - 2);
  const double pooled_sd = std::sqrt(pooled_var);
  if (!(pooled_sd > 0.0)) throw std::invalid_argument("degenerate pooled standard deviation");

  DistributionComparison out;
  out.mean_diff = mb - mo;
  out.cohens_d = out.mean_diff / pooled_sd;

  std::mt19937_64 rng(seed);
  // Plain modulo keeps resampling identical across standard libraries; the
  // bias is negligible for 64-bit draws.
  auto pick = [&rng](std::span<const double> xs) { return xs[rng() % xs.size()]; };
  std::vector<double> diffs(bootstrap_samples);
  for (auto& d : diffs) {
    double sb = 0.0, so = 0.0;
    for (std::size_t i = 0; i < buggy.size(); ++i) sb += pick(buggy);
    for (std::size_t i = 0; i < other.size(); ++i) so += pick(other);
    d = sb / static_cast<double>(buggy.size()) - so / static_cast<double>(other.size());
  }
  std::sort(diffs.begin(), diffs.end());
  out.ci_low = quantile(diffs, 0.025);
  out.ci_high = quantile(diffs, 0.975);
  return out;
}

}  // namespace nbf
