#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptl/patterns.hpp"
#include "ptl/predictor.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance (divides by count)
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
};

// Throws DomainError on empty input. Quantiles interpolate linearly between
// order statistics at position q * (count - 1).
Summary summarize(std::span<const double> samples);

double standard_normal_cdf(double x);

struct NormalityReport {
  std::vector<double> zscores;
  double ks_statistic = 0.0;
  double critical_value = 0.0;
  double alpha = 0.0;
  bool pass = false;
  std::uint64_t block_size = 0;  // 0 when the z-scores did not come from blocks
};

inline constexpr std::size_t kMinKsSamples = 3;
inline constexpr std::size_t kMinBlocks = 5;

// sup |F_emp - Phi| over the sample.
double ks_statistic_standard_normal(std::span<const double> samples);

// Two-sided critical value: Massey's table for m <= 35, c(alpha)/sqrt(m)
// beyond. alpha must be 0.10, 0.05 or 0.01.
double ks_critical_value(std::size_t m, double alpha);

NormalityReport ks_test_standard_normal(std::span<const double> zscores, double alpha);

// Per-block predictions over the same tiling as count_in_blocks.
std::vector<Prediction> block_predictions(const TuplePattern& pattern, std::uint64_t n,
                                          std::uint64_t block_size,
                                          std::uint64_t truncation_prime = kDefaultTruncationPrime);

// (count - mean) / sigma elementwise.
std::vector<double> z_scores(std::span<const double> counts, std::span<const Prediction> predictions);

// Requires block_size >= 1000 and at least 5 blocks.
std::vector<double> block_z_scores(const TuplePattern& pattern, std::uint64_t n,
                                   std::uint64_t block_size,
                                   std::uint64_t truncation_prime = kDefaultTruncationPrime,
                                   const SieveOptions& options = {});

// block_z_scores followed by ks_test_standard_normal.
NormalityReport block_normality(const TuplePattern& pattern, std::uint64_t n,
                                std::uint64_t block_size, double alpha,
                                std::uint64_t truncation_prime = kDefaultTruncationPrime,
                                const SieveOptions& options = {});

}  // namespace ptl
