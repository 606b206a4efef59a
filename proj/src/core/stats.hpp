#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace tracekit {

// Regularized lower incomplete gamma P(a, x); series for x < a+1, Lentz
// continued fraction otherwise.
double gamma_p(double a, double x);

double chi_square_cdf(double x, double df);

double normal_cdf(double x);

// Inverse of normal_cdf, by bisection; fine for the rare analytic setup call.
double normal_quantile(double p);

// KL divergence between zero-mean Gaussians with diagonal covariances
// (entries are variances): 0.5 * (trace(S1^-1 S0) - n - ln det S0/det S1).
double kl_zero_mean_gaussians(std::span<const double> diag0, std::span<const double> diag1);

// Pinsker: TV <= sqrt(KL / 2).
double pinsker_tv_upper(double kl);

// Exact total variation between N(0, sigma0^2)^k and N(0, sigma1^2)^k via the
// radial reduction: the likelihood ratio is monotone in |z|^2, so the distance
// is a difference of two chi-square CDFs at the density crossing radius.
double scale_family_tv(double sigma0, double sigma1, std::size_t k);

struct ChiSquareTailResult {
    double empirical_upper;  // Pr(X > k + 2 sqrt(k) t + 2 t^2), Monte Carlo
    double empirical_lower;  // Pr(X < k - 2 sqrt(k) t), Monte Carlo
    double bound;            // e^{-t^2}
    double stderr_upper;
    double stderr_lower;
};

// Monte Carlo check of the chi-square tail bounds at the stated thresholds;
// X is summed from k squared Gaussians.
ChiSquareTailResult chi_square_tail_check(std::size_t k, double t, std::size_t trials,
                                          RandomSource& rng);

// Kolmogorov-Smirnov machinery (used by sampler diagnostics and tests).
double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_critical(double alpha, std::size_t n);
double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m);

} // namespace tracekit
