#pragma once

// Segmented sieve of Eratosthenes over arbitrary [lo, hi) ranges with
// hi <= 2^63.
//
// Only odd integers are stored. Bit i of a bitmap stands for the odd number
// first_odd() + 2*i, where first_odd() is the smallest odd integer >= lo.
// The prime 2 is carried as a separate flag.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ptl {

inline constexpr std::uint64_t kMaxSieveBound = std::uint64_t{1} << 63;

struct SieveOptions {
  // Odd entries per segment. Any value >= 1 gives the same bitmap.
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  // Worker threads; 0 means hardware concurrency. Never changes results.
  unsigned threads = 1;
};

class PrimeBitmap {
 public:
  // Takes ownership of an odd-number bitset. Bits past odd_count() must be
  // zero; the constructor clears them.
  PrimeBitmap(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  bool contains_two() const noexcept { return lo_ <= 2 && hi_ > 2; }

  std::uint64_t first_odd() const noexcept { return lo_ | 1; }
  std::uint64_t odd_count() const noexcept { return odd_count_; }

  // Throws InvalidRangeError when n is outside [lo, hi).
  bool is_prime(std::uint64_t n) const;

  bool odd_bit(std::uint64_t index) const noexcept {
    return (words_[index >> 6] >> (index & 63)) & 1U;
  }

  // Number of primes in [lo, hi).
  std::uint64_t count() const noexcept;

  std::vector<std::uint64_t> primes() const;

  // Calls fn(p) for each prime in ascending order.
  template <class Fn>
  void for_each_prime(Fn&& fn) const {
    if (contains_two()) fn(std::uint64_t{2});
    const std::uint64_t base = first_odd();
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        bits &= bits - 1;
        fn(base + 2 * (64 * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(b)));
      }
    }
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const PrimeBitmap&, const PrimeBitmap&) = default;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::uint64_t odd_count_;
  std::vector<std::uint64_t> words_;
};

// Consecutive primes lower < upper with nothing prime in between.
struct GapRecord {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  std::uint64_t gap = 0;

  friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

// Odd primes <= limit, plus 2 at the front when limit >= 2.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// floor(sqrt(n)), exact for every 64-bit n.
std::uint64_t integer_sqrt(std::uint64_t n) noexcept;

// Exact primality for any 64-bit n (deterministic Miller-Rabin).
bool is_prime_u64(std::uint64_t n) noexcept;

PrimeBitmap sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options = {});

// Streams the sieve of [lo, hi) one segment at a time, in ascending order.
// Each segment is a PrimeBitmap over a subinterval; memory stays O(segment).
void sieve_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options,
                    const std::function<void(const PrimeBitmap&)>& visit);

// pi(n): number of primes <= n.
std::uint64_t prime_count(std::uint64_t n, const SieveOptions& options = {});

// Largest gap between consecutive primes both <= x. Ties keep the first.
GapRecord max_prime_gap(std::uint64_t x, const SieveOptions& options = {});

// Every consecutive-prime gap (both primes <= x) exceeding all earlier gaps.
std::vector<GapRecord> gap_records_up_to(std::uint64_t x, const SieveOptions& options = {});

// Binary cache format: "PBM1", lo (u64 LE), hi (u64 LE), then the odd bitset
// padded to whole bytes, LSB first.
void write_bitmap(std::ostream& out, const PrimeBitmap& bitmap);
PrimeBitmap read_bitmap(std::istream& in);
void save_bitmap(const std::string& path, const PrimeBitmap& bitmap);
PrimeBitmap load_bitmap(const std::string& path);

}  // namespace ptl
