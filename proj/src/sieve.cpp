#include "ptl/sieve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>

#include "parallel.hpp"
#include "ptl/error.hpp"

namespace ptl {
namespace {

constexpr std::uint64_t kAllOnes = ~std::uint64_t{0};

std::uint64_t odd_count_in(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t first = lo | 1;
  return first < hi ? (hi - first + 1) / 2 : 0;
}

void check_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2) {
    throw InvalidRangeError("sieve range must start at 2 or above, got lo=" + std::to_string(lo));
  }
  if (hi <= lo) {
    throw InvalidRangeError("sieve range is empty: lo=" + std::to_string(lo) +
                            " hi=" + std::to_string(hi));
  }
  if (hi > kMaxSieveBound) {
    throw InvalidRangeError("sieve range exceeds 2^63: hi=" + std::to_string(hi));
  }
}

// Clears the bits of composite odd numbers in a block of `count` odd
// integers starting at first_odd. Bits live at [offset, offset + count).
void sieve_odd_block(std::uint64_t first_odd, std::uint64_t count,
                     std::span<const std::uint64_t> odd_primes, std::uint64_t* words,
                     std::uint64_t offset) {
  if (count == 0) return;
  const std::uint64_t last = first_odd + 2 * (count - 1);
  for (const std::uint64_t p : odd_primes) {
    const std::uint64_t square = p * p;
    if (square > last) break;
    std::uint64_t start;
    if (square >= first_odd) {
      start = square;
    } else {
      start = (first_odd + p - 1) / p * p;
      if ((start & 1) == 0) start += p;
    }
    for (std::uint64_t j = (start - first_odd) / 2; j < count; j += p) {
      const std::uint64_t bit = offset + j;
      words[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63));
    }
  }
}

struct SegmentPlan {
  std::uint64_t lo;
  std::uint64_t hi;
  std::uint64_t first_odd;
  std::uint64_t odd_count;
  std::uint64_t segment;
  std::uint64_t segments;
};

SegmentPlan plan_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options,
                          bool word_aligned) {
  if (options.segment_size == 0) throw DomainError("segment size must be positive");
  SegmentPlan plan{lo, hi, lo | 1, odd_count_in(lo, hi), options.segment_size, 1};
  if (word_aligned) plan.segment = (plan.segment + 63) / 64 * 64;
  if (plan.odd_count > 0) plan.segments = (plan.odd_count + plan.segment - 1) / plan.segment;
  return plan;
}

std::vector<std::uint64_t> odd_primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes = primes_up_to(limit);
  if (!primes.empty() && primes.front() == 2) primes.erase(primes.begin());
  return primes;
}

// Odd sieving primes up to sqrt(hi - 1), handed out in ascending chunks.
// Below kMaterializeLimit there is a single chunk; above it the primes are
// generated a segment at a time so that windows near 2^63 never hold all
// ~1.5e8 primes below 3e9 in memory.
class BasePrimes {
 public:
  static constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 25;
  static constexpr std::uint64_t kChunkOdds = std::uint64_t{1} << 21;

  explicit BasePrimes(std::uint64_t hi) : limit_(integer_sqrt(hi - 1)) {
    streaming_ = limit_ > kMaterializeLimit;
    primes_ = odd_primes_up_to(streaming_ ? integer_sqrt(limit_) : limit_);
  }

  bool streaming() const noexcept { return streaming_; }

  template <class Fn>
  void for_each_chunk(Fn&& fn) const {
    if (!streaming_) {
      fn(std::span<const std::uint64_t>(primes_));
      return;
    }
    std::vector<std::uint64_t> words;
    std::vector<std::uint64_t> chunk;
    for (std::uint64_t first = 3; first <= limit_; first += 2 * kChunkOdds) {
      const std::uint64_t count = std::min(kChunkOdds, (limit_ - first) / 2 + 1);
      words.assign((count + 63) / 64, kAllOnes);
      sieve_odd_block(first, count, primes_, words.data(), 0);
      chunk.clear();
      for (std::size_t w = 0; w < words.size(); ++w) {
        for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
          const std::uint64_t i = 64 * w + static_cast<std::uint64_t>(__builtin_ctzll(bits));
          if (i < count) chunk.push_back(first + 2 * i);
        }
      }
      fn(std::span<const std::uint64_t>(chunk));
    }
  }

 private:
  std::uint64_t limit_;
  bool streaming_ = false;
  std::vector<std::uint64_t> primes_;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

PrimeBitmap::PrimeBitmap(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words)
    : lo_(lo), hi_(hi), odd_count_(0), words_(std::move(words)) {
  check_range(lo, hi);
  odd_count_ = odd_count_in(lo, hi);
  const std::uint64_t needed = (odd_count_ + 63) / 64;
  if (words_.size() != needed) {
    throw InternalConsistencyError("bitmap word count does not match its range");
  }
  if (odd_count_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (odd_count_ % 64)) - 1;
}

bool PrimeBitmap::is_prime(std::uint64_t n) const {
  if (n < lo_ || n >= hi_) {
    throw InvalidRangeError("query " + std::to_string(n) + " outside bitmap range [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + ")");
  }
  if (n == 2) return true;
  if ((n & 1) == 0) return false;
  return odd_bit((n - first_odd()) / 2);
}

std::uint64_t PrimeBitmap::count() const noexcept {
  std::uint64_t total = contains_two() ? 1 : 0;
  for (const std::uint64_t w : words_) total += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return total;
}

std::vector<std::uint64_t> PrimeBitmap::primes() const {
  std::vector<std::uint64_t> out;
  for_each_prime([&](std::uint64_t p) { out.push_back(p); });
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  // composite[i] refers to 2i + 3.
  const std::uint64_t n_odd = limit >= 3 ? (limit - 1) / 2 : 0;
  std::vector<bool> composite(n_odd, false);
  for (std::uint64_t i = 0; i < n_odd; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 3;
    out.push_back(p);
    for (std::uint64_t j = (p * p - 3) / 2; j < n_odd; j += p) composite[j] = true;
  }
  return out;
}

std::uint64_t integer_sqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (const std::uint64_t a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

PrimeBitmap sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options) {
  check_range(lo, hi);
  const unsigned threads = detail::resolve_threads(options.threads);
  const SegmentPlan plan = plan_segments(lo, hi, options, threads > 1);
  const BasePrimes base(hi);
  std::vector<std::uint64_t> words((plan.odd_count + 63) / 64, kAllOnes);
  base.for_each_chunk([&](std::span<const std::uint64_t> chunk) {
    detail::parallel_for(plan.segments, threads, [&](std::size_t s) {
      const std::uint64_t offset = s * plan.segment;
      if (offset >= plan.odd_count) return;
      const std::uint64_t count = std::min(plan.segment, plan.odd_count - offset);
      sieve_odd_block(plan.first_odd + 2 * offset, count, chunk, words.data(), offset);
    });
  });
  return PrimeBitmap(lo, hi, std::move(words));
}

void sieve_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options,
                    const std::function<void(const PrimeBitmap&)>& visit) {
  check_range(lo, hi);
  const unsigned threads = detail::resolve_threads(options.threads);
  const SegmentPlan plan = plan_segments(lo, hi, options, false);
  const BasePrimes base(hi);
  auto offset_of = [&](std::uint64_t s) { return s * plan.segment; };
  auto count_of = [&](std::uint64_t s) {
    return plan.odd_count == 0 ? 0 : std::min(plan.segment, plan.odd_count - offset_of(s));
  };

  // Batches of segments are sieved concurrently and visited in order. When
  // base primes are streamed every batch regenerates them, so batches then
  // grow to about 32 MiB of bitmap.
  const std::uint64_t batch =
      base.streaming() ? std::max<std::uint64_t>(threads, (std::uint64_t{1} << 28) / plan.segment)
                       : threads;
  std::vector<std::vector<std::uint64_t>> slots(std::min(batch, plan.segments));
  for (std::uint64_t first = 0; first < plan.segments; first += batch) {
    const std::uint64_t n = std::min(batch, plan.segments - first);
    for (std::uint64_t i = 0; i < n; ++i) slots[i].assign((count_of(first + i) + 63) / 64, kAllOnes);
    base.for_each_chunk([&](std::span<const std::uint64_t> chunk) {
      detail::parallel_for(n, threads, [&](std::size_t i) {
        const std::uint64_t s = first + i;
        sieve_odd_block(plan.first_odd + 2 * offset_of(s), count_of(s), chunk, slots[i].data(), 0);
      });
    });
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t s = first + i;
      const std::uint64_t seg_lo = s == 0 ? lo : plan.first_odd + 2 * offset_of(s);
      const std::uint64_t seg_hi =
          s + 1 == plan.segments ? hi : plan.first_odd + 2 * (offset_of(s) + count_of(s));
      visit(PrimeBitmap(seg_lo, seg_hi, std::move(slots[i])));
    }
  }
}

std::uint64_t prime_count(std::uint64_t n, const SieveOptions& options) {
  if (n == 0) throw DomainError("prime_count requires n >= 1");
  if (n < 2) return 0;
  if (n >= kMaxSieveBound) throw InvalidRangeError("prime_count bound exceeds 2^63 - 1");
  std::uint64_t total = 0;
  sieve_segments(2, n + 1, options, [&](const PrimeBitmap& seg) { total += seg.count(); });
  return total;
}

namespace {

template <class OnPair>
void scan_consecutive_primes(std::uint64_t x, const SieveOptions& options, OnPair&& on_pair) {
  if (x < 3) {
    throw InsufficientDataError("need at least two primes <= x, got x=" + std::to_string(x));
  }
  if (x >= kMaxSieveBound) throw InvalidRangeError("gap scan bound exceeds 2^63 - 1");
  std::uint64_t previous = 0;
  sieve_segments(2, x + 1, options, [&](const PrimeBitmap& seg) {
    seg.for_each_prime([&](std::uint64_t p) {
      if (previous != 0) on_pair(previous, p);
      previous = p;
    });
  });
}

}  // namespace

GapRecord max_prime_gap(std::uint64_t x, const SieveOptions& options) {
  GapRecord best;
  scan_consecutive_primes(x, options, [&](std::uint64_t lower, std::uint64_t upper) {
    if (upper - lower > best.gap) best = {lower, upper, upper - lower};
  });
  return best;
}

std::vector<GapRecord> gap_records_up_to(std::uint64_t x, const SieveOptions& options) {
  std::vector<GapRecord> records;
  scan_consecutive_primes(x, options, [&](std::uint64_t lower, std::uint64_t upper) {
    if (records.empty() || upper - lower > records.back().gap) {
      records.push_back({lower, upper, upper - lower});
    }
  });
  return records;
}

// ---------------------------------------------------------------------------
// Cache file

namespace {

constexpr std::array<char, 4> kMagic{'P', 'B', 'M', '1'};

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IoError("truncated bitmap header");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_bitmap(std::ostream& out, const PrimeBitmap& bitmap) {
  out.write(kMagic.data(), kMagic.size());
  put_u64_le(out, bitmap.lo());
  put_u64_le(out, bitmap.hi());
  const std::uint64_t n_bytes = (bitmap.odd_count() + 7) / 8;
  const auto words = bitmap.words();
  std::vector<char> buffer(n_bytes);
  for (std::uint64_t i = 0; i < n_bytes; ++i) {
    buffer[i] = static_cast<char>((words[i / 8] >> (8 * (i % 8))) & 0xFF);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("failed to write bitmap");
}

PrimeBitmap read_bitmap(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("not a PBM1 bitmap file");
  }
  const std::uint64_t lo = get_u64_le(in);
  const std::uint64_t hi = get_u64_le(in);
  if (lo < 2 || hi <= lo || hi > kMaxSieveBound) throw IoError("bitmap header has an invalid range");
  const std::uint64_t odd_count = odd_count_in(lo, hi);
  const std::uint64_t n_bytes = (odd_count + 7) / 8;
  std::vector<unsigned char> buffer(n_bytes);
  if (!in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(n_bytes))) {
    throw IoError("truncated bitmap payload");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes after bitmap payload");
  if (odd_count % 8 != 0 && (buffer.back() >> (odd_count % 8)) != 0) {
    throw IoError("bitmap padding bits are not zero");
  }
  std::vector<std::uint64_t> words((odd_count + 63) / 64, 0);
  for (std::uint64_t i = 0; i < n_bytes; ++i) {
    words[i / 8] |= static_cast<std::uint64_t>(buffer[i]) << (8 * (i % 8));
  }
  return PrimeBitmap(lo, hi, std::move(words));
}

void save_bitmap(const std::string& path, const PrimeBitmap& bitmap) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_bitmap(out, bitmap);
}

PrimeBitmap load_bitmap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_bitmap(in);
}

}  // namespace ptl
