#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptl {

inline constexpr std::uint64_t kDefaultTruncationPrime = 1'000'000;

// Offsets of a prime k-tuple shape, e.g. {0, 2} for twins or {0, 2, 6}.
// Always starts at 0 and is strictly increasing.
class TuplePattern {
 public:
  // Throws DomainError unless offsets is non-empty, starts at 0 and is
  // strictly increasing.
  explicit TuplePattern(std::vector<std::uint64_t> offsets);

  // Parses "0,2,6". Rejects empty fields, negative or unsorted offsets and a
  // first offset other than 0.
  static TuplePattern parse(std::string_view text);

  static TuplePattern twin() { return TuplePattern({0, 2}); }

  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  std::uint64_t max_offset() const noexcept { return offsets_.back(); }
  bool all_even() const noexcept;

  std::string to_string() const;

  friend bool operator==(const TuplePattern&, const TuplePattern&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
};

// Truncated singular-series constant C_k for a pattern.
struct SingularSeriesValue {
  double constant = 0.0;
  std::uint64_t truncation_prime = 0;
  // Upper estimate of the relative error from dropping the factors p > P.
  double tail_bound = 0.0;
  bool admissible = false;
};

// Number of distinct residues of the offsets modulo prime p. Throws
// DomainError if p is not prime.
std::uint64_t omega(const TuplePattern& pattern, std::uint64_t p);

// True iff the offsets miss at least one residue class modulo every prime.
bool is_admissible(const TuplePattern& pattern);

// prod_{p <= P} (1 - omega(p)/p) / (1 - 1/p)^k, or exactly 0 when the pattern
// is inadmissible.
SingularSeriesValue singular_series(const TuplePattern& pattern,
                                    std::uint64_t truncation_prime = kDefaultTruncationPrime);

// Q/phi(Q) for the primorial Q of all primes <= a, i.e. prod p/(p-1).
double primorial_ratio(std::uint64_t a);

}  // namespace ptl
