#include "ptl/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "ptl/counter.hpp"
#include "ptl/error.hpp"

namespace ptl {
namespace {

double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Massey (1951) two-sided critical values, columns alpha = 0.10, 0.05, 0.01.
constexpr std::array<std::array<double, 3>, 35> kMasseyTable{{
    {0.950, 0.975, 0.995}, {0.776, 0.842, 0.929}, {0.642, 0.708, 0.828}, {0.564, 0.624, 0.733},
    {0.510, 0.565, 0.669}, {0.470, 0.521, 0.618}, {0.438, 0.486, 0.577}, {0.411, 0.457, 0.543},
    {0.388, 0.432, 0.514}, {0.368, 0.410, 0.490}, {0.352, 0.391, 0.468}, {0.338, 0.375, 0.450},
    {0.325, 0.361, 0.433}, {0.314, 0.349, 0.418}, {0.304, 0.338, 0.404}, {0.295, 0.328, 0.392},
    {0.286, 0.318, 0.381}, {0.278, 0.309, 0.371}, {0.272, 0.301, 0.363}, {0.264, 0.294, 0.356},
    {0.259, 0.287, 0.344}, {0.253, 0.281, 0.337}, {0.247, 0.275, 0.330}, {0.242, 0.269, 0.323},
    {0.238, 0.264, 0.317}, {0.233, 0.259, 0.311}, {0.229, 0.254, 0.305}, {0.225, 0.250, 0.300},
    {0.221, 0.246, 0.295}, {0.218, 0.242, 0.290}, {0.214, 0.238, 0.285}, {0.211, 0.234, 0.281},
    {0.208, 0.231, 0.277}, {0.205, 0.227, 0.273}, {0.202, 0.224, 0.269},
}};

constexpr std::array<double, 3> kAsymptoticCoefficient{1.224, 1.358, 1.628};

std::size_t alpha_column(double alpha) {
  constexpr std::array<double, 3> kAlphas{0.10, 0.05, 0.01};
  for (std::size_t i = 0; i < kAlphas.size(); ++i) {
    if (std::abs(alpha - kAlphas[i]) < 1e-9) return i;
  }
  throw DomainError("unsupported KS significance level " + std::to_string(alpha) +
                    " (use 0.10, 0.05 or 0.01)");
}

}  // namespace

Summary summarize(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("cannot summarize an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  Summary s;
  s.count = sorted.size();
  const double n = static_cast<double>(s.count);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / n;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q05 = quantile_sorted(sorted, 0.05);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.q95 = quantile_sorted(sorted, 0.95);
  return s;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_standard_normal(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = standard_normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / m - f;
    const double below = f - static_cast<double>(i) / m;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_critical_value(std::size_t m, double alpha) {
  const std::size_t col = alpha_column(alpha);
  if (m == 0) throw DomainError("KS critical value needs at least one sample");
  if (m <= kMasseyTable.size()) return kMasseyTable[m - 1][col];
  return kAsymptoticCoefficient[col] / std::sqrt(static_cast<double>(m));
}

NormalityReport ks_test_standard_normal(std::span<const double> zscores, double alpha) {
  alpha_column(alpha);
  if (zscores.size() < kMinKsSamples) {
    throw InsufficientDataError("KS test needs at least " + std::to_string(kMinKsSamples) +
                                " samples, got " + std::to_string(zscores.size()));
  }
  const double critical = ks_critical_value(zscores.size(), alpha);
  NormalityReport report;
  report.zscores.assign(zscores.begin(), zscores.end());
  report.ks_statistic = ks_statistic_standard_normal(zscores);
  report.critical_value = critical;
  report.alpha = alpha;
  report.pass = report.ks_statistic < critical;
  return report;
}

std::vector<Prediction> block_predictions(const TuplePattern& pattern, std::uint64_t n,
                                          std::uint64_t block_size,
                                          std::uint64_t truncation_prime) {
  if (block_size < kMinBlockSize) {
    throw DomainError("block size must be >= " + std::to_string(kMinBlockSize));
  }
  const std::uint64_t m = n / block_size;
  if (m < kMinBlocks) {
    throw InsufficientDataError("need at least " + std::to_string(kMinBlocks) + " blocks, got " +
                                std::to_string(m));
  }
  const SingularSeriesValue constant = singular_series(pattern, truncation_prime);
  std::vector<Prediction> out;
  out.reserve(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    const double start = static_cast<double>(std::max<std::uint64_t>(2, j * block_size));
    const double end = static_cast<double>(j + 1 == m ? n + 1 : (j + 1) * block_size);
    out.push_back(predict_interval(pattern, constant, start, end));
  }
  return out;
}

std::vector<double> z_scores(std::span<const double> counts, std::span<const Prediction> predictions) {
  if (counts.size() != predictions.size()) {
    throw DomainError("counts and predictions differ in length");
  }
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = z_score(counts[i], predictions[i]);
  return out;
}

std::vector<double> block_z_scores(const TuplePattern& pattern, std::uint64_t n,
                                   std::uint64_t block_size, std::uint64_t truncation_prime,
                                   const SieveOptions& options) {
  const std::vector<Prediction> predictions =
      block_predictions(pattern, n, block_size, truncation_prime);
  const BlockCounts blocks = count_in_blocks(pattern, n, block_size, options);
  std::vector<double> counts;
  counts.reserve(blocks.blocks.size());
  for (const Block& b : blocks.blocks) counts.push_back(static_cast<double>(b.count));
  return z_scores(counts, predictions);
}

NormalityReport block_normality(const TuplePattern& pattern, std::uint64_t n,
                                std::uint64_t block_size, double alpha,
                                std::uint64_t truncation_prime, const SieveOptions& options) {
  NormalityReport report = ks_test_standard_normal(
      block_z_scores(pattern, n, block_size, truncation_prime, options), alpha);
  report.block_size = block_size;
  return report;
}

}  // namespace ptl
