#pragma once

// Test-side oracles: quadrature and summary statistics kept independent of
// the library code paths they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace oracles {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n = 20000) {
    if (n % 2 == 1)
        ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        s += f(a + h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double normal_pdf(double x, double variance) {
    return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * 3.141592653589793 * variance);
}

// KL divergence between N(0, var0) and N(0, var1) by direct integration;
// log densities keep the integrand finite where the lighter tail underflows.
inline double kl_gaussian_quadrature(double var0, double var1) {
    const double lim = 40.0 * std::sqrt(std::max(var0, var1));
    return simpson(
        [&](double x) {
            const double log_p = -0.5 * x * x / var0 - 0.5 * std::log(var0);
            const double log_q = -0.5 * x * x / var1 - 0.5 * std::log(var1);
            const double p = normal_pdf(x, var0);
            return p > 1e-300 ? p * (log_p - log_q) : 0.0;
        },
        -lim, lim, 40000);
}

// Total variation between N(0, var0) and N(0, var1) by direct integration.
inline double tv_gaussian_quadrature(double var0, double var1) {
    const double lim = 40.0 * std::sqrt(std::max(var0, var1));
    return 0.5 * simpson(
                     [&](double x) {
                         return std::fabs(normal_pdf(x, var0) - normal_pdf(x, var1));
                     },
                     -lim, lim, 40000);
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance_about(const std::vector<double>& v, double center) {
    double s = 0.0;
    for (double x : v)
        s += (x - center) * (x - center);
    return s / static_cast<double>(v.size() - 1);
}

inline double sample_variance(const std::vector<double>& v) {
    return variance_about(v, mean(v));
}

} // namespace oracles
