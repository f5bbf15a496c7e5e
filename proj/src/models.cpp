#include "ptl/models.hpp"

#include <cmath>

#include "parallel.hpp"
#include "ptl/error.hpp"
#include "ptl/predictor.hpp"
#include "ptl/sieve.hpp"

namespace ptl {
namespace {

double keep_probability(double numerator, std::uint64_t n) {
  const double p = numerator / std::log(static_cast<double>(n));
  return std::clamp(p, 0.0, 1.0);
}

// Feeds kept elements of one realisation, in ascending order, to `keep`.
// Draw order: cramer draws one uniform per n in [a, b); granville one per
// candidate coprime to Q; random_sieve one residue per prime p <= z,
// ascending.
template <class Keep>
void realise(const ModelConfig& config, std::uint64_t seed, Keep&& keep, ModelSample* detail) {
  Xoshiro256 rng(seed);
  switch (config.kind) {
    case ModelKind::cramer: {
      for (std::uint64_t n = config.a; n < config.b; ++n) {
        if (rng.uniform() < keep_probability(1.0, n)) keep(n);
      }
      break;
    }
    case ModelKind::granville: {
      const std::uint64_t big_a = *config.granville_a;
      const double ratio = primorial_ratio(big_a);
      std::vector<std::uint8_t> excluded(config.b - config.a, 0);
      for (const std::uint64_t p : primes_up_to(big_a)) {
        for (std::uint64_t m = (config.a + p - 1) / p * p; m < config.b; m += p) {
          excluded[m - config.a] = 1;
        }
      }
      for (std::uint64_t n = config.a; n < config.b; ++n) {
        if (excluded[n - config.a]) continue;
        if (rng.uniform() < keep_probability(ratio, n)) keep(n);
      }
      break;
    }
    case ModelKind::random_sieve: {
      const std::vector<std::uint64_t> primes = primes_up_to(*config.sieve_z);
      std::vector<std::uint8_t> removed(config.b - config.a, 0);
      for (const std::uint64_t p : primes) {
        const std::uint64_t r = rng.below(p);
        if (detail) {
          detail->sieve_primes.push_back(p);
          detail->residues.push_back(r);
        }
        // First m >= a with m = r (mod p).
        const std::uint64_t shift = (r + p - config.a % p) % p;
        for (std::uint64_t m = config.a + shift; m < config.b; m += p) removed[m - config.a] = 1;
      }
      for (std::uint64_t n = config.a; n < config.b; ++n) {
        if (!removed[n - config.a]) keep(n);
      }
      break;
    }
  }
}

TrialOutcome run_one(const ModelConfig& config, std::uint64_t seed, std::uint64_t index) {
  TrialOutcome out;
  out.trial_index = index;
  out.seed = seed;
  std::uint64_t previous = 0;
  bool any = false;
  realise(
      config, seed,
      [&](std::uint64_t n) {
        if (any) out.max_gap = std::max(out.max_gap, n - previous);
        previous = n;
        any = true;
        ++out.element_count;
      },
      nullptr);
  const double top = static_cast<double>(config.b - 1);
  out.ratio_cramer = static_cast<double>(out.max_gap) / gap_bound_cramer(top);
  out.ratio_xi = static_cast<double>(out.max_gap) / gap_bound_xi(top);
  return out;
}

void require_kind(const ModelConfig& config, ModelKind kind) {
  if (config.kind != kind) {
    throw ModelParameterError("config is for model " + std::string(to_string(config.kind)) +
                              ", expected " + std::string(to_string(kind)));
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::cramer:
      return "cramer";
    case ModelKind::granville:
      return "granville";
    case ModelKind::random_sieve:
      return "random-sieve";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "cramer") return ModelKind::cramer;
  if (text == "granville") return ModelKind::granville;
  if (text == "random-sieve" || text == "random_sieve") return ModelKind::random_sieve;
  throw ModelParameterError("unknown model \"" + std::string(text) + "\"");
}

void ModelConfig::validate() const {
  if (a < 3) throw DomainError("model range must start at 3 or above, got a=" + std::to_string(a));
  if (b <= a) throw InvalidRangeError("model range is empty");
  if (b > kMaxSieveBound) throw InvalidRangeError("model range exceeds 2^63");
  const bool wants_a = kind == ModelKind::granville;
  const bool wants_z = kind == ModelKind::random_sieve;
  if (granville_a.has_value() != wants_a) {
    throw ModelParameterError(wants_a ? "granville model needs parameter A"
                                      : "parameter A only applies to the granville model");
  }
  if (sieve_z.has_value() != wants_z) {
    throw ModelParameterError(wants_z ? "random-sieve model needs parameter z"
                                      : "parameter z only applies to the random-sieve model");
  }
  if (wants_a) {
    const std::uint64_t x = a - 1;
    if (b != 2 * x + 1) {
      throw ModelParameterError("granville range must be (x, 2x], i.e. a = x+1, b = 2x+1");
    }
    if (*granville_a < 2) throw DomainError("granville A must be >= 2");
    // A >= sqrt(x) sieves out nearly everything.
    if (*granville_a * *granville_a >= x) {
      throw ModelParameterError("granville A=" + std::to_string(*granville_a) +
                                " is >= sqrt(x); too few survivors");
    }
  }
  if (wants_z) {
    if (*sieve_z < 2) throw DomainError("random-sieve z must be >= 2");
    if (*sieve_z >= b) throw ModelParameterError("random-sieve z >= b leaves an empty model");
  }
}

ModelSample sample_model(const ModelConfig& config) {
  config.validate();
  ModelSample sample;
  realise(config, config.seed, [&](std::uint64_t n) { sample.elements.push_back(n); }, &sample);
  return sample;
}

TrialOutcome simulate_cramer(const ModelConfig& config) {
  require_kind(config, ModelKind::cramer);
  return simulate(config);
}

TrialOutcome simulate_granville(const ModelConfig& config) {
  require_kind(config, ModelKind::granville);
  return simulate(config);
}

TrialOutcome simulate_random_sieve(const ModelConfig& config) {
  require_kind(config, ModelKind::random_sieve);
  return simulate(config);
}

TrialOutcome simulate(const ModelConfig& config) {
  config.validate();
  return run_one(config, config.seed, 0);
}

TrialOutcome simulate_trial(const ModelConfig& config, std::uint64_t trial_index) {
  config.validate();
  return run_one(config, derive_seed(config.seed, trial_index), trial_index);
}

TrialSummary summarize_trials(const std::vector<TrialOutcome>& outcomes) {
  std::vector<double> gaps, cramer, xi_ratios, counts;
  for (const TrialOutcome& o : outcomes) {
    gaps.push_back(static_cast<double>(o.max_gap));
    cramer.push_back(o.ratio_cramer);
    xi_ratios.push_back(o.ratio_xi);
    counts.push_back(static_cast<double>(o.element_count));
  }
  return {summarize(gaps), summarize(cramer), summarize(xi_ratios), summarize(counts)};
}

TrialRun run_trials(const ModelConfig& config, std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw DomainError("need at least one trial");
  config.validate();
  TrialRun run;
  run.config = config;
  run.outcomes.resize(trials);
  detail::parallel_for(trials, threads, [&](std::size_t t) {
    run.outcomes[t] = run_one(config, derive_seed(config.seed, t), t);
  });
  run.summary = summarize_trials(run.outcomes);
  return run;
}

}  // namespace ptl
