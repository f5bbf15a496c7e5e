#include "ptl/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ptl/error.hpp"
#include "ptl/sieve.hpp"

namespace ptl {
namespace {

// Past this many offsets the direct product risks drifting toward underflow.
constexpr std::size_t kLogSpaceThreshold = 8;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

TuplePattern::TuplePattern(std::vector<std::uint64_t> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) throw DomainError("pattern needs at least one offset");
  if (offsets_.front() != 0) throw DomainError("pattern must start at offset 0");
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) {
      throw DomainError("pattern offsets must be strictly increasing");
    }
  }
}

TuplePattern TuplePattern::parse(std::string_view text) {
  std::vector<std::uint64_t> offsets;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view field = trim(rest.substr(0, comma));
    if (field.empty()) throw DomainError("empty field in pattern \"" + std::string(text) + "\"");
    if (field.front() == '-') {
      throw DomainError("negative offset in pattern \"" + std::string(text) + "\"");
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw DomainError("bad offset \"" + std::string(field) + "\" in pattern");
    }
    offsets.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return TuplePattern(std::move(offsets));
}

bool TuplePattern::all_even() const noexcept {
  return std::all_of(offsets_.begin(), offsets_.end(), [](std::uint64_t o) { return o % 2 == 0; });
}

std::string TuplePattern::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(offsets_[i]);
  }
  return out;
}

std::uint64_t omega(const TuplePattern& pattern, std::uint64_t p) {
  if (!is_prime_u64(p)) throw DomainError("omega needs a prime modulus, got " + std::to_string(p));
  if (p > pattern.max_offset()) return pattern.size();
  std::vector<std::uint64_t> residues;
  residues.reserve(pattern.size());
  for (const std::uint64_t o : pattern.offsets()) residues.push_back(o % p);
  std::sort(residues.begin(), residues.end());
  return static_cast<std::uint64_t>(std::unique(residues.begin(), residues.end()) - residues.begin());
}

bool is_admissible(const TuplePattern& pattern) {
  for (const std::uint64_t p : primes_up_to(pattern.size())) {
    if (omega(pattern, p) >= p) return false;
  }
  return true;
}

SingularSeriesValue singular_series(const TuplePattern& pattern, std::uint64_t truncation_prime) {
  if (truncation_prime < 2) {
    throw DomainError("truncation prime must be >= 2, got " + std::to_string(truncation_prime));
  }
  SingularSeriesValue value;
  value.truncation_prime = truncation_prime;
  if (!is_admissible(pattern)) return value;

  value.admissible = true;
  const std::size_t k = pattern.size();
  const double kd = static_cast<double>(k);
  const bool log_space = k >= kLogSpaceThreshold;
  double product = 1.0;
  double log_sum = 0.0;
  for (const std::uint64_t p : primes_up_to(truncation_prime)) {
    const double pd = static_cast<double>(p);
    const double w = static_cast<double>(omega(pattern, p));
    if (log_space) {
      log_sum += std::log1p(-w / pd) - kd * std::log1p(-1.0 / pd);
    } else {
      product *= (1.0 - w / pd) / std::pow(1.0 - 1.0 / pd, kd);
    }
  }
  value.constant = log_space ? std::exp(log_sum) : product;
  // sum_{p > P} k^2/p^2 <= k^2/P
  value.tail_bound = std::expm1(kd * kd / static_cast<double>(truncation_prime));
  return value;
}

double primorial_ratio(std::uint64_t a) {
  if (a < 2) throw DomainError("primorial_ratio needs A >= 2, got " + std::to_string(a));
  double ratio = 1.0;
  for (const std::uint64_t p : primes_up_to(a)) {
    const double pd = static_cast<double>(p);
    ratio *= pd / (pd - 1.0);
  }
  return ratio;
}

}  // namespace ptl
