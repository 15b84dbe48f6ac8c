// combinatorics.hpp
// Log-space factorials, binomials and accumulation helpers.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace hqaoa {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_factorial(std::int64_t k) {
  return std::lgamma(static_cast<double>(k) + 1.0);
}

/// log C(n, k); -inf when k is outside [0, n].
inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// C(n, k) as a double; 0 for out-of-range arguments.
inline double binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  // Exact product for the sizes used as small fixtures; log-gamma beyond.
  if (n <= 60) {
    double r = 1.0;
    const std::int64_t kk = k < n - k ? k : n - k;
    for (std::int64_t i = 1; i <= kk; ++i) r = r * static_cast<double>(n - kk + i) / static_cast<double>(i);
    return std::round(r);
  }
  return std::exp(log_binomial(n, k));
}

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

/// exponent * log_p with the 0^0 = 1 convention.
inline double pow_log(std::int64_t exponent, double log_p) {
  if (exponent == 0) return 0.0;
  return static_cast<double>(exponent) * log_p;
}

/// Table of log k! for k in [0, max].
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::int64_t max) : values_(static_cast<std::size_t>(max) + 1) {
    for (std::int64_t k = 0; k <= max; ++k) values_[static_cast<std::size_t>(k)] = log_factorial(k);
  }
  double operator()(std::int64_t k) const { return values_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<double> values_;
};

/// Streaming log-sum-exp.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

}  // namespace hqaoa
