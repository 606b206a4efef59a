#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracekit {

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int i = 1; i < 10000; ++i) {
        term *= x / (a + i);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double mult = d * c;
        h *= mult;
        if (std::fabs(mult - 1.0) < 1e-16)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    if (x < a + 1.0)
        return gamma_p_series(a, x);
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_square_cdf(double x, double df) {
    if (!(df > 0.0))
        throw std::invalid_argument("chi_square_cdf: df must be positive");
    if (x <= 0.0)
        return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double kl_zero_mean_gaussians(std::span<const double> diag0, std::span<const double> diag1) {
    if (diag0.size() != diag1.size() || diag0.empty())
        throw std::invalid_argument("kl_zero_mean_gaussians: covariance size mismatch");
    double trace_term = 0.0, log_det_ratio = 0.0;
    for (std::size_t i = 0; i < diag0.size(); ++i) {
        if (!(diag0[i] > 0.0) || !(diag1[i] > 0.0))
            throw std::invalid_argument("kl_zero_mean_gaussians: variances must be positive");
        trace_term += diag0[i] / diag1[i];
        log_det_ratio += std::log(diag0[i] / diag1[i]);
    }
    return 0.5 * (trace_term - static_cast<double>(diag0.size()) - log_det_ratio);
}

double pinsker_tv_upper(double kl) {
    if (kl < 0.0)
        throw std::invalid_argument("pinsker_tv_upper: KL must be nonnegative");
    return std::sqrt(0.5 * kl);
}

double scale_family_tv(double sigma0, double sigma1, std::size_t k) {
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0))
        throw std::invalid_argument("scale_family_tv: scales must be positive");
    if (k == 0)
        throw std::invalid_argument("scale_family_tv: k must be >= 1");
    if (sigma0 == sigma1)
        return 0.0;
    const double lo = std::min(sigma0, sigma1), hi = std::max(sigma0, sigma1);
    const double v_lo = lo * lo, v_hi = hi * hi;
    const double crossing = static_cast<double>(k) * std::log(v_hi / v_lo) /
                            (1.0 / v_lo - 1.0 / v_hi);
    const double df = static_cast<double>(k);
    return chi_square_cdf(crossing / v_lo, df) - chi_square_cdf(crossing / v_hi, df);
}

ChiSquareTailResult chi_square_tail_check(std::size_t k, double t, std::size_t trials,
                                          RandomSource& rng) {
    if (k == 0 || t < 0.0 || trials < 10000)
        throw std::invalid_argument("chi_square_tail_check: need k >= 1, t >= 0, trials >= 1e4");
    const double kk = static_cast<double>(k);
    const double upper = kk + 2.0 * std::sqrt(kk) * t + 2.0 * t * t;
    const double lower = kk - 2.0 * std::sqrt(kk) * t;
    std::size_t above = 0, below = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        double x = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double g = rng.next_gaussian();
            x += g * g;
        }
        if (x > upper)
            ++above;
        if (x < lower)
            ++below;
    }
    const double n = static_cast<double>(trials);
    ChiSquareTailResult out;
    out.empirical_upper = static_cast<double>(above) / n;
    out.empirical_lower = static_cast<double>(below) / n;
    out.bound = std::exp(-t * t);
    out.stderr_upper = std::sqrt(out.empirical_upper * (1.0 - out.empirical_upper) / n);
    out.stderr_lower = std::sqrt(out.empirical_lower * (1.0 - out.empirical_lower) / n);
    return out;
}

double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::fabs(f - static_cast<double>(i + 1) / n));
    }
    return worst;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        worst = std::max(worst, std::fabs(static_cast<double>(i) / na -
                                          static_cast<double>(j) / nb));
    }
    return worst;
}

namespace {
double ks_c(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }
} // namespace

double ks_critical(double alpha, std::size_t n) {
    return ks_c(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return ks_c(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

} // namespace tracekit
