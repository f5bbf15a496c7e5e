#pragma once

// Monte Carlo versions of three random models of the primes:
//
//   cramer        every n in [a, b) is kept independently with
//                 probability min(1, 1/log n)
//   granville     n sharing a factor with Q = prod_{p <= A} p is dropped;
//                 the rest are kept with probability
//                 min(1, (Q/phi(Q)) / log n). Range is (x, 2x] = [x+1, 2x+1).
//   random_sieve  one residue a_p in [0, p) is drawn per prime p <= z and
//                 every n = a_p (mod p) is removed
//
// Gap statistics only look at consecutive kept elements; the distances from
// a and b to the outermost elements are ignored. Ratios are normalised by
// log^2 of the largest integer in the range, b - 1.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptl/random.hpp"
#include "ptl/stats.hpp"

namespace ptl {

enum class ModelKind { cramer, granville, random_sieve };

std::string_view to_string(ModelKind kind);
// Accepts "cramer", "granville", "random-sieve" / "random_sieve".
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
  ModelKind kind = ModelKind::cramer;
  std::uint64_t a = 3;
  std::uint64_t b = 4;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> granville_a;
  std::optional<std::uint64_t> sieve_z;

  // Throws ValidationError subclasses on a bad combination.
  void validate() const;
};

struct TrialOutcome {
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t element_count = 0;
  std::uint64_t max_gap = 0;
  double ratio_cramer = 0.0;
  double ratio_xi = 0.0;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

// One realised model set, for inspection and property checks.
struct ModelSample {
  std::vector<std::uint64_t> elements;  // ascending
  // random_sieve only: sieving primes and the residue removed for each.
  std::vector<std::uint64_t> sieve_primes;
  std::vector<std::uint64_t> residues;
};

ModelSample sample_model(const ModelConfig& config);

TrialOutcome simulate_cramer(const ModelConfig& config);
TrialOutcome simulate_granville(const ModelConfig& config);
TrialOutcome simulate_random_sieve(const ModelConfig& config);
// Dispatches on config.kind.
TrialOutcome simulate(const ModelConfig& config);

// Trial t runs with seed derive_seed(config.seed, t).
TrialOutcome simulate_trial(const ModelConfig& config, std::uint64_t trial_index);

struct TrialSummary {
  Summary max_gap;
  Summary ratio_cramer;
  Summary ratio_xi;
  Summary element_count;
};

TrialSummary summarize_trials(const std::vector<TrialOutcome>& outcomes);

struct TrialRun {
  ModelConfig config;
  std::string generator{kGeneratorTag};
  std::vector<TrialOutcome> outcomes;  // indexed by trial
  TrialSummary summary;
};

// Results do not depend on `threads` (0 = hardware concurrency).
TrialRun run_trials(const ModelConfig& config, std::uint64_t trials, unsigned threads = 1);

}  // namespace ptl
