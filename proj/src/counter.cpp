#include "ptl/counter.hpp"

#include <algorithm>
#include <string>

#include "parallel.hpp"
#include "ptl/error.hpp"
#include "ptl/predictor.hpp"

namespace ptl {
namespace {

// Counts first elements over a bitmap that covers [2, n + max_offset].
class TupleCounter {
 public:
  TupleCounter(const TuplePattern& pattern, std::uint64_t n, const SieveOptions& options)
      : pattern_(pattern), bitmap_(make_bitmap(pattern, n, options)) {
    for (const std::uint64_t o : pattern.offsets()) half_offsets_.push_back(o / 2);
  }

  // First elements x in [start, end).
  std::uint64_t count(std::uint64_t start, std::uint64_t end) const {
    std::uint64_t total = 0;
    if (start <= 2 && end > 2 && starts_at_two()) ++total;
    if (!pattern_.all_even()) return total;  // odd x + odd offset is even
    // Odd x = 3 + 2i for i in [i0, i1).
    const std::uint64_t lo = std::max<std::uint64_t>(start, 3);
    if (lo >= end) return total;
    const std::uint64_t i0 = (lo - 3 + 1) / 2;
    const std::uint64_t i1 = (end - 3 + 1) / 2;
    for (std::uint64_t i = i0; i < i1; i += 64) {
      std::uint64_t acc = ~std::uint64_t{0};
      for (const std::uint64_t h : half_offsets_) acc &= bits_at(i + h);
      const std::uint64_t width = std::min<std::uint64_t>(64, i1 - i);
      if (width < 64) acc &= (std::uint64_t{1} << width) - 1;
      total += static_cast<std::uint64_t>(__builtin_popcountll(acc));
    }
    return total;
  }

 private:
  static PrimeBitmap make_bitmap(const TuplePattern& pattern, std::uint64_t n,
                                 const SieveOptions& options) {
    if (n < 2) throw DomainError("tuple count bound must be >= 2");
    if (n >= kMaxSieveBound - pattern.max_offset()) {
      throw InvalidRangeError("tuple count bound plus offsets exceeds 2^63");
    }
    return sieve_range(2, n + pattern.max_offset() + 1, options);
  }

  bool starts_at_two() const {
    for (const std::uint64_t o : pattern_.offsets()) {
      if (!bitmap_.is_prime(2 + o)) return false;
    }
    return true;
  }

  // 64 bits starting at odd index pos; bits past the bitmap read as 0.
  std::uint64_t bits_at(std::uint64_t pos) const {
    const auto words = bitmap_.words();
    const std::uint64_t w = pos >> 6;
    const unsigned shift = static_cast<unsigned>(pos & 63);
    if (w >= words.size()) return 0;
    std::uint64_t out = words[w] >> shift;
    if (shift != 0 && w + 1 < words.size()) out |= words[w + 1] << (64 - shift);
    return out;
  }

  TuplePattern pattern_;
  PrimeBitmap bitmap_;
  std::vector<std::uint64_t> half_offsets_;
};

}  // namespace

std::uint64_t count_tuples(const TuplePattern& pattern, std::uint64_t n,
                           const SieveOptions& options) {
  const TupleCounter counter(pattern, n, options);
  return counter.count(2, n + 1);
}

std::uint64_t BlockCounts::total() const noexcept {
  std::uint64_t sum = 0;
  for (const Block& b : blocks) sum += b.count;
  return sum;
}

BlockCounts count_in_blocks(const TuplePattern& pattern, std::uint64_t n, std::uint64_t block_size,
                            const SieveOptions& options) {
  if (block_size < kMinBlockSize) {
    throw DomainError("block size must be >= " + std::to_string(kMinBlockSize) + ", got " +
                      std::to_string(block_size));
  }
  if (n / 2 < block_size) {
    throw DomainError("need n >= 2 * block size, got n=" + std::to_string(n) +
                      " block=" + std::to_string(block_size));
  }
  const TupleCounter counter(pattern, n, options);
  BlockCounts out{pattern, n, block_size, {}};
  const std::uint64_t m = n / block_size;
  out.blocks.resize(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    out.blocks[j].start = std::max<std::uint64_t>(2, j * block_size);
    out.blocks[j].end = j + 1 == m ? n + 1 : (j + 1) * block_size;
  }
  detail::parallel_for(m, options.threads, [&](std::size_t j) {
    out.blocks[j].count = counter.count(out.blocks[j].start, out.blocks[j].end);
  });
  return out;
}

std::vector<BoundComparison> bound_comparison_table(std::span<const std::uint64_t> xs,
                                                    const SieveOptions& options) {
  if (xs.empty()) return {};
  const std::uint64_t top = *std::max_element(xs.begin(), xs.end());
  for (const std::uint64_t x : xs) {
    if (x < 3) throw InsufficientDataError("bound comparison needs x >= 3");
  }
  const std::vector<GapRecord> records = gap_records_up_to(top, options);
  std::vector<BoundComparison> rows;
  rows.reserve(xs.size());
  for (const std::uint64_t x : xs) {
    // Last record whose upper prime is <= x.
    auto it = std::upper_bound(records.begin(), records.end(), x,
                               [](std::uint64_t v, const GapRecord& r) { return v < r.upper; });
    BoundComparison row;
    row.x = x;
    row.record = *std::prev(it);
    row.max_gap = row.record.gap;
    const double xd = static_cast<double>(x);
    row.ratio_cramer = static_cast<double>(row.max_gap) / gap_bound_cramer(xd);
    row.ratio_xi = static_cast<double>(row.max_gap) / gap_bound_xi(xd);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ptl
