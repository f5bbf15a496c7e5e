#include "ptl/predictor.hpp"

#include <cmath>
#include <string>

#include "ptl/error.hpp"
#include "ptl/quadrature.hpp"
#include "ptl/sieve.hpp"

namespace ptl {
namespace {

constexpr double kRelTol = 1e-9;
constexpr double kAbsFloor = 1e-15;

Prediction base_prediction(const TuplePattern& pattern, const SingularSeriesValue& constant,
                           double lower, double upper) {
  Prediction out;
  out.lower = lower;
  out.n = upper;
  out.pattern = pattern;
  out.constant_used = constant;
  return out;
}

void fill_dispersion(Prediction& p) {
  p.has_dispersion = true;
  if (!p.constant_used.admissible) return;
  const int k = static_cast<int>(p.pattern.size());
  const double c = p.constant_used.constant;
  const double second = integrate_log_power(p.lower, p.n, 2 * k);
  p.variance = p.mean - c * c * second;
  if (p.variance < 0.0) {
    throw InternalConsistencyError("negative predicted variance over [" + std::to_string(p.lower) +
                                   ", " + std::to_string(p.n) + "]");
  }
  p.sigma = std::sqrt(p.variance);
}

}  // namespace

const Constants& constants() {
  static const Constants c = [] {
    const long double g = kEulerGamma;
    return Constants{static_cast<double>(g), static_cast<double>(2.0L * std::exp(-g)),
                     static_cast<double>(std::exp(g) / 2.0L)};
  }();
  return c;
}

double integrate_log_power(double a, double b, int k) {
  if (k < 1) throw DomainError("log power must be >= 1");
  if (!(a > 1.0)) throw DomainError("lower limit must exceed 1");
  if (b < a) throw DomainError("upper limit below lower limit");
  const auto f = [k](double t) { return std::pow(std::log(t), -k); };
  // Geometric panels [a, 2a], [2a, 4a], ... keep the relative target
  // meaningful on every piece of a long range.
  double total = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, 2.0 * lo);
    total += adaptive_simpson(f, lo, hi, kRelTol, kAbsFloor);
    lo = hi;
  }
  return total;
}

double integrate_log_power(double n, int k) {
  if (!(n > 2.0)) throw DomainError("integration bound must exceed 2");
  return integrate_log_power(2.0, n, k);
}

long long Prediction::mean_rounded() const { return std::llround(mean); }
long long Prediction::sigma_rounded() const { return std::llround(sigma); }

Prediction predicted_count(const TuplePattern& pattern, double n, std::uint64_t truncation_prime) {
  if (!(n > 2.0)) throw DomainError("prediction bound must exceed 2");
  Prediction p = base_prediction(pattern, singular_series(pattern, truncation_prime), 2.0, n);
  if (p.constant_used.admissible) {
    p.mean = p.constant_used.constant *
             integrate_log_power(2.0, n, static_cast<int>(pattern.size()));
  }
  return p;
}

Prediction predicted_sigma(const TuplePattern& pattern, double n, std::uint64_t truncation_prime) {
  Prediction p = predicted_count(pattern, n, truncation_prime);
  fill_dispersion(p);
  return p;
}

Prediction predict_interval(const TuplePattern& pattern, const SingularSeriesValue& constant,
                            double lower, double upper) {
  if (!(upper > lower)) throw DomainError("prediction interval is empty");
  Prediction p = base_prediction(pattern, constant, lower, upper);
  if (constant.admissible) {
    p.mean = constant.constant * integrate_log_power(lower, upper, static_cast<int>(pattern.size()));
  }
  fill_dispersion(p);
  return p;
}

double z_score(double actual, const Prediction& prediction) {
  if (!(prediction.sigma > 0.0)) {
    throw DegeneratePredictionError("prediction has zero sigma; z-score undefined");
  }
  return (actual - prediction.mean) / prediction.sigma;
}

double mertens_product(std::uint64_t y) {
  if (y < 1) throw DomainError("mertens_product needs y >= 1");
  double product = 1.0;
  for (const std::uint64_t p : primes_up_to(y)) product *= 1.0 - 1.0 / static_cast<double>(p);
  return product;
}

double dependence_coefficient(std::uint64_t x) {
  if (x < 9) throw DomainError("dependence_coefficient needs x >= 9, got " + std::to_string(x));
  return 1.0 / (std::log(static_cast<double>(x)) * mertens_product(integer_sqrt(x)));
}

double gap_bound_cramer(double x) {
  if (!(x > 1.0)) throw DomainError("gap bound needs x > 1");
  const double l = std::log(x);
  return l * l;
}

double gap_bound_xi(double x) { return constants().xi * gap_bound_cramer(x); }

}  // namespace ptl
