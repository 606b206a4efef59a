#include "core/trials.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace tracekit {

std::uint64_t derive_stream(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

struct BlockSums {
    double sum_value = 0.0;
    double sum_dev2 = 0.0;
    double sum_dev4 = 0.0;
    std::uint64_t successes = 0;
};

constexpr std::size_t kBlockSize = 4096;

// Trials are split into fixed blocks; workers pick up blocks round-robin and
// the partial sums merge in block order, so the result is bit-identical for
// any worker count.
std::vector<BlockSums> run_blocks(std::size_t trials, int workers, double center,
                                  std::optional<double> success_radius,
                                  const std::function<double(std::size_t, RandomSource&)>& trial_fn,
                                  const RandomSource& base) {
    if (trials < 2)
        throw std::invalid_argument("trial runner: need at least 2 trials");
    if (workers < 1)
        throw std::invalid_argument("trial runner: workers must be >= 1");
    const std::size_t num_blocks = (trials + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> blocks(num_blocks);

    auto work = [&](std::size_t first_block, std::size_t stride) {
        for (std::size_t b = first_block; b < num_blocks; b += stride) {
            BlockSums sums;
            const std::size_t lo = b * kBlockSize;
            const std::size_t hi = std::min(lo + kBlockSize, trials);
            for (std::size_t t = lo; t < hi; ++t) {
                RandomSource rng(base.seed(), derive_stream(base.stream_id(), t));
                const double v = trial_fn(t, rng);
                const double d = v - center;
                sums.sum_value += v;
                sums.sum_dev2 += d * d;
                sums.sum_dev4 += d * d * d * d;
                if (success_radius && std::fabs(d) <= *success_radius)
                    ++sums.successes;
            }
            blocks[b] = sums;
        }
    };

    if (workers == 1 || num_blocks == 1) {
        work(0, 1);
    } else {
        const std::size_t nthreads = std::min<std::size_t>(workers, num_blocks);
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t w = 0; w < nthreads; ++w)
            pool.emplace_back(work, w, nthreads);
        for (auto& th : pool)
            th.join();
    }
    return blocks;
}

ExperimentReport summarize(const std::vector<BlockSums>& blocks, std::size_t trials,
                           double center) {
    double sum_value = 0.0, sum_dev2 = 0.0, sum_dev4 = 0.0;
    for (const auto& b : blocks) {
        sum_value += b.sum_value;
        sum_dev2 += b.sum_dev2;
        sum_dev4 += b.sum_dev4;
    }
    const double n = static_cast<double>(trials);
    ExperimentReport rep;
    rep.trials = trials;
    rep.empirical_mean = sum_value / n;
    rep.empirical_variance = sum_dev2 / (n - 1.0);
    const double m2 = sum_dev2 / n;
    const double m4 = sum_dev4 / n;
    rep.stderr_variance = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    const double mean_dev = rep.empirical_mean - center;
    const double about_mean = std::max(sum_dev2 - n * mean_dev * mean_dev, 0.0) / (n - 1.0);
    rep.stderr_mean = std::sqrt(about_mean / n);
    return rep;
}

} // namespace

ExperimentReport run_trials(const LinearEstimator& est, const ImplicitMatrix& a,
                            std::size_t trials, const RandomSource& base, int workers) {
    const double center = a.trace();
    auto fn = [&](std::size_t, RandomSource& rng) { return est.estimate(a, rng).value; };
    auto blocks = run_blocks(trials, workers, center, std::nullopt, fn, base);
    ExperimentReport rep = summarize(blocks, trials, center);
    rep.estimator_id = est.id();
    rep.n = a.dim();
    rep.k = est.queries();
    rep.seed = base.seed();
    return rep;
}

double analytic_variance(EstimatorKind kind, const ImplicitMatrix& a, std::size_t k) {
    if (k == 0)
        throw std::invalid_argument("analytic_variance: k must be >= 1");
    const double f2 = a.frobenius_norm() * a.frobenius_norm();
    switch (kind) {
    case EstimatorKind::Gaussian:
        return 2.0 * f2 / static_cast<double>(k);
    case EstimatorKind::Rademacher:
        return 2.0 * (f2 - a.diagonal_sum_of_squares()) / static_cast<double>(k);
    default:
        throw std::invalid_argument("analytic_variance: no closed form for this kind");
    }
}

WorstCaseResult worst_case_variance(const LinearEstimator& est,
                                    const std::vector<std::pair<std::string, ImplicitMatrix>>& family,
                                    std::size_t trials, const RandomSource& base,
                                    int workers) {
    if (family.empty())
        throw std::invalid_argument("worst_case_variance: empty matrix family");
    for (const auto& [id, m] : family)
        if (std::fabs(m.frobenius_norm() - 1.0) > 1e-9)
            throw std::invalid_argument("worst_case_variance: matrix '" + id +
                                        "' does not have unit Frobenius norm");
    WorstCaseResult out;
    out.variance = -1.0;
    std::uint64_t member = 0;
    for (const auto& [id, m] : family) {
        RandomSource stream(base.seed(),
                            derive_stream(base.stream_id(), 0x10000000ULL + member++));
        ExperimentReport rep = run_trials(est, m, trials, stream, workers);
        rep.matrix_id = id;
        if (rep.empirical_variance > out.variance) {
            out.variance = rep.empirical_variance;
            out.argmax_matrix_id = id;
        }
        out.reports.push_back(std::move(rep));
    }
    return out;
}

EpsDeltaResult eps_delta_success(const LinearEstimator& est, const ImplicitMatrix& a,
                                 double epsilon, std::size_t trials,
                                 const RandomSource& base, int workers) {
    const double tr = a.trace();
    if (!(tr > 0.0))
        throw std::invalid_argument(
            "eps_delta_success: trace must be positive for a multiplicative guarantee");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("eps_delta_success: epsilon must be positive");

    auto fn = [&](std::size_t, RandomSource& rng) { return est.estimate(a, rng).value; };
    auto blocks = run_blocks(trials, workers, tr, epsilon * tr, fn, base);

    EpsDeltaResult out;
    out.report = summarize(blocks, trials, tr);
    out.report.estimator_id = est.id();
    out.report.n = a.dim();
    out.report.k = est.queries();
    out.report.seed = base.seed();
    out.report.epsilon = epsilon;

    std::uint64_t successes = 0;
    for (const auto& b : blocks)
        successes += b.successes;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    out.report.success_rate = p;
    const double z = 1.959963984540054; // 95%
    const std::uint64_t failures = trials - successes;
    if (successes >= 30 && failures >= 30) {
        out.success_ci95 = z * std::sqrt(p * (1.0 - p) / n);
    } else {
        // Wilson interval half-width
        const double denom = 1.0 + z * z / n;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        out.success_ci95 = half;
    }
    return out;
}

} // namespace tracekit
