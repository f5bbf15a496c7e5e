// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptl/counter.hpp"
#include "ptl/models.hpp"
#include "ptl/patterns.hpp"
#include "ptl/predictor.hpp"
#include "ptl/random.hpp"
#include "ptl/sieve.hpp"
#include "ptl/stats.hpp"

using namespace ptl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const std::uint64_t kTwinPoints[] = {100'000, 1'000'000, 10'000'000};

void ac1(Check& c) {
  const std::uint64_t expected[] = {1224, 8169, 58980};
  const auto start = Clock::now();
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t got = count_tuples(TuplePattern::twin(), kTwinPoints[i]);
    c.detail << " pi2(" << kTwinPoints[i] << ")=" << got;
    c.expect(got == expected[i], "count at " + std::to_string(kTwinPoints[i]));
  }
  const double t = seconds_since(start);
  c.detail << " time=" << t << "s";
  c.expect(t < 5.0, "runtime < 5 s");
}

void ac2(Check& c) {
  const long long expected[] = {1249, 8248, 58754};
  for (int i = 0; i < 3; ++i) {
    const long long got = predicted_count(TuplePattern::twin(), kTwinPoints[i]).mean_rounded();
    c.detail << " " << got;
    c.expect(std::llabs(got - expected[i]) <= 1, "prediction at " + std::to_string(kTwinPoints[i]));
  }
}

void ac3(Check& c) {
  const long long expected[] = {35, 90, 242};
  for (int i = 0; i < 3; ++i) {
    const long long got = predicted_sigma(TuplePattern::twin(), kTwinPoints[i]).sigma_rounded();
    c.detail << " " << got;
    c.expect(std::llabs(got - expected[i]) <= 1, "sigma at " + std::to_string(kTwinPoints[i]));
  }
}

void ac4(Check& c) {
  const double got = singular_series(TuplePattern::twin(), 1'000'000).constant;
  c.detail << " C2=" << got;
  c.expect(std::abs(got - 1.320324) <= 1e-4, "constant");
}

void ac5(Check& c) {
  const TuplePattern triple({0, 2, 4});
  const SingularSeriesValue s = singular_series(triple, 1'000'000);
  c.expect(!s.admissible, "not admissible");
  c.expect(!is_admissible(triple), "is_admissible");
  c.expect(s.constant == 0.0, "constant 0");
  for (std::uint64_t n : {7ULL, 8ULL, 100ULL, 12'345ULL, 1'000'000ULL}) {
    c.expect(count_tuples(triple, n) == 1, "count at " + std::to_string(n));
  }
  c.detail << " admissible=" << s.admissible << " C3=" << s.constant;
}

void ac6(Check& c) {
  const auto start = Clock::now();
  const double xi = constants().xi;
  const double bridge = std::log(1e10) * mertens_product(100'000) / xi;
  const double dep = dependence_coefficient(1e10);
  const double t = seconds_since(start);
  c.detail << " log(x)*M(sqrt x)/xi=" << bridge << " dep=" << dep << " time=" << t << "s";
  c.expect(bridge >= 0.99 && bridge <= 1.01, "Mertens bridge");
  c.expect(std::abs(dep / 0.89054 - 1) <= 0.02, "dependence coefficient");
  c.expect(t < 1.0, "runtime < 1 s");
}

void ac7(Check& c) {
  const GapRecord rec = max_prime_gap(1'000'000);
  c.expect(rec.gap == 114, "max gap 114");
  std::vector<std::uint64_t> xs;
  for (std::uint64_t x = 10; x <= 1'000'000; x *= 10) xs.push_back(x);
  for (const GapRecord& r : gap_records_up_to(1'000'000)) xs.push_back(r.upper);
  const std::vector<BoundComparison> rows = bound_comparison_table(xs);
  const BoundComparison& top = rows[5];
  c.expect(top.x == 1'000'000 && top.max_gap == 114, "table row at 10^6");
  c.expect(std::abs(top.ratio_cramer - 0.597) < 5e-4, "ratio_cramer ~ 0.597");
  const double inv_xi = 1.0 / constants().xi;
  double worst = 0;
  for (const BoundComparison& r : rows) {
    worst = std::max(worst, std::abs(r.ratio_xi / r.ratio_cramer - inv_xi));
  }
  c.expect(worst <= 1e-12, "ratio identity");
  c.detail << " gap=" << rec.gap << " ratio_cramer=" << top.ratio_cramer << " rows=" << rows.size()
           << " max|ratio_xi/ratio_cramer-1/xi|=" << worst;
}

void ac8(Check& c) {
  ModelConfig config;
  config.kind = ModelKind::cramer;
  config.a = 3;
  config.b = 1'000'000;
  config.seed = 20'240'601;
  const auto start = Clock::now();
  const TrialRun first = run_trials(config, 200, 0);
  const double t = seconds_since(start);
  const TrialRun second = run_trials(config, 200, 0);
  const double log2 = std::pow(std::log(1e6), 2);
  double mean = 0;
  for (const TrialOutcome& o : first.outcomes) mean += o.max_gap / log2;
  mean /= 200;
  c.detail << " mean(max_gap/log^2)=" << mean << " time=" << t << "s";
  c.expect(mean >= 0.6 && mean <= 1.1, "mean ratio in [0.6, 1.1]");
  c.expect(first.outcomes == second.outcomes, "rerun identical");
  c.expect(t < 30.0, "runtime < 30 s");
}

void ac9(Check& c) {
  ModelConfig config;
  config.kind = ModelKind::random_sieve;
  config.a = 100'000;
  config.b = 200'000;
  config.sieve_z = 100;
  double density = 1;
  for (std::uint64_t p : primes_up_to(100)) density *= 1 - 1.0 / p;
  double total = 0;
  std::uint64_t violations = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    config.seed = derive_seed(909, t);
    const ModelSample s = sample_model(config);
    // Every n in the range is either removed by some drawn class or kept.
    std::size_t next = 0;
    for (std::uint64_t n = config.a; n < config.b; ++n) {
      bool hit = false;
      for (std::size_t i = 0; i < s.sieve_primes.size(); ++i) {
        if (n % s.sieve_primes[i] == s.residues[i]) hit = true;
      }
      const bool kept = next < s.elements.size() && s.elements[next] == n;
      if (kept) ++next;
      if (hit == kept) ++violations;
    }
    if (next != s.elements.size()) ++violations;
    total += static_cast<double>(s.elements.size());
  }
  const double mean = total / 100 / 100'000;
  c.detail << " violations=" << violations << " density=" << mean << " expected=" << density;
  c.expect(violations == 0, "residue classes excluded");
  c.expect(std::abs(mean / density - 1) <= 0.15, "density within 15%");
}

void ac10(Check& c) {
  const std::vector<double> z{-25.0 / 35, -79.0 / 90, 226.0 / 242};
  const NormalityReport global = ks_test_standard_normal(z, 0.05);
  const NormalityReport blocks = block_normality(TuplePattern::twin(), 1'000'000, 10'000, 0.01);
  c.detail << " global D=" << global.ks_statistic << " crit=" << global.critical_value
           << " blocks D=" << blocks.ks_statistic << " crit=" << blocks.critical_value;
  c.expect(global.pass, "global z-scores");
  c.expect(blocks.pass, "block z-scores");
}

void ac11(Check& c) {
  Xoshiro256 rng(11);
  int tested = 0;
  int mismatches = 0;
  while (tested < 20) {
    const std::uint64_t k = 1 + rng.below(4);
    std::vector<std::uint64_t> offsets{0};
    while (offsets.size() < k) {
      const std::uint64_t o = 1 + rng.below(30);
      if (std::find(offsets.begin(), offsets.end(), o) == offsets.end()) offsets.push_back(o);
    }
    std::sort(offsets.begin(), offsets.end());
    const TuplePattern pattern(offsets);
    if (!is_admissible(pattern)) continue;
    ++tested;
    const std::uint64_t got = count_tuples(pattern, 100'000);
    const std::uint64_t want = test::brute_force_tuple_count(offsets, 100'000);
    if (got != want) {
      ++mismatches;
      c.detail << " mismatch " << pattern.to_string() << ": " << got << " vs " << want;
    }
  }
  c.detail << " patterns=" << tested << " mismatches=" << mismatches;
  c.expect(mismatches == 0, "brute-force agreement");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"AC1 twin counts at 1e5, 1e6, 1e7", ac1},
      {"AC2 twin predictions", ac2},
      {"AC3 twin sigmas", ac3},
      {"AC4 twin constant", ac4},
      {"AC5 degenerate triple (0,2,4)", ac5},
      {"AC6 Mertens product and dependence coefficient at 1e10", ac6},
      {"AC7 gap table at 1e6", ac7},
      {"AC8 Cramer model, 200 trials on [3, 1e6)", ac8},
      {"AC9 random sieve exclusion and density", ac9},
      {"AC10 KS normality", ac10},
      {"AC11 tuple counts against trial division", ac11},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failures;
    std::printf("[%s] %s:%s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
