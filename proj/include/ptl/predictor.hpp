#pragma once

#include <cstdint>

#include "ptl/patterns.hpp"

namespace ptl {

// Euler-Mascheroni constant to 20 digits. Everything below derives from it.
inline constexpr long double kEulerGamma = 0.57721566490153286061L;

struct Constants {
  double euler_gamma;
  double xi;            // 2 e^{-gamma} = 1.12292...
  double half_e_gamma;  // e^{gamma} / 2 = 0.89054...
};

const Constants& constants();

// int_2^n dt / log^k t. Throws DomainError for n <= 2 or k < 1.
double integrate_log_power(double n, int k);

// int_a^b dt / log^k t for 1 < a <= b.
double integrate_log_power(double a, double b, int k);

// Hardy-Littlewood prediction for the number of tuples whose first element
// lies in [lower, n].
struct Prediction {
  double lower = 2.0;
  double n = 0.0;
  TuplePattern pattern = TuplePattern::twin();
  double mean = 0.0;
  double variance = 0.0;
  double sigma = 0.0;
  // False when only the mean was computed.
  bool has_dispersion = false;
  SingularSeriesValue constant_used;

  long long mean_rounded() const;
  long long sigma_rounded() const;
};

// mean = C_k int_2^n log^{-k}. Variance and sigma are left at 0.
Prediction predicted_count(const TuplePattern& pattern, double n,
                           std::uint64_t truncation_prime = kDefaultTruncationPrime);

// Mean plus variance = C_k int log^{-k} - C_k^2 int log^{-2k}, sigma = sqrt.
Prediction predicted_sigma(const TuplePattern& pattern, double n,
                           std::uint64_t truncation_prime = kDefaultTruncationPrime);

// Same as predicted_sigma over [lower, upper] with a precomputed constant.
Prediction predict_interval(const TuplePattern& pattern, const SingularSeriesValue& constant,
                            double lower, double upper);

// (actual - mean) / sigma. Throws DegeneratePredictionError if sigma == 0.
double z_score(double actual, const Prediction& prediction);

// prod_{p <= y} (1 - 1/p); 1 for y < 2.
double mertens_product(std::uint64_t y);

// 1 / (log x * prod_{p <= sqrt x}(1 - 1/p)); tends to e^gamma / 2.
double dependence_coefficient(std::uint64_t x);

// log^2 x
double gap_bound_cramer(double x);
// 2 e^{-gamma} log^2 x
double gap_bound_xi(double x);

}  // namespace ptl
