#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace regime {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(const double* values, std::size_t n) {
    double maxv = kNegInf;
    for (std::size_t i = 0; i < n; ++i) maxv = std::max(maxv, values[i]);
    if (!std::isfinite(maxv)) return maxv;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::exp(values[i] - maxv);
    return maxv + std::log(sum);
}

inline double log_sum_exp(const std::vector<double>& values) {
    return log_sum_exp(values.data(), values.size());
}

inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// log N(x | mu, var), scalar.
inline double log_normal_pdf(double x, double mu, double var) {
    constexpr double kLogTwoPi = 1.8378770664093454836;
    const double d = x - mu;
    return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

}  // namespace regime
