#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptl/patterns.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

// Tuples are counted by their first element x: x is counted when x + o is
// prime for every offset o, even if x + max_offset lies beyond the bound.

// Number of x in [2, n] starting a prime instance of the pattern.
std::uint64_t count_tuples(const TuplePattern& pattern, std::uint64_t n,
                           const SieveOptions& options = {});

// First elements in [start, end).
struct Block {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::uint64_t count = 0;
};

// Blocks tile [2, n]: block j covers [max(2, jB), (j+1)B) and the last block
// is stretched to end at n + 1, so the counts always sum to
// count_tuples(pattern, n).
struct BlockCounts {
  TuplePattern pattern;
  std::uint64_t n = 0;
  std::uint64_t block_size = 0;
  std::vector<Block> blocks;

  std::uint64_t total() const noexcept;
};

inline constexpr std::uint64_t kMinBlockSize = 1000;

// Throws DomainError when block_size < 1000 or n < 2 * block_size.
BlockCounts count_in_blocks(const TuplePattern& pattern, std::uint64_t n, std::uint64_t block_size,
                            const SieveOptions& options = {});

struct BoundComparison {
  std::uint64_t x = 0;
  GapRecord record;
  std::uint64_t max_gap = 0;
  double ratio_cramer = 0.0;   // gap / log^2 x
  double ratio_xi = 0.0;  // gap / (2 e^{-gamma} log^2 x)
};

// One row per x (in input order), each from the maximal gap with both primes
// <= x. All rows share a single sieve pass up to max(xs).
std::vector<BoundComparison> bound_comparison_table(std::span<const std::uint64_t> xs,
                                                    const SieveOptions& options = {});

}  // namespace ptl
