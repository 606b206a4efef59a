#include "core/games.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "core/sampler.hpp"
#include "core/stats.hpp"
#include "core/trials.hpp"

namespace tracekit {

namespace {

constexpr double kSqrt5 = 2.2360679774997896;

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / 3.0))
        throw std::invalid_argument("game epsilon must lie in (0, 1/3)");
}

} // namespace

GameParams GameParams::from_epsilon(double epsilon) {
    require_epsilon(epsilon);
    GameParams p;
    p.epsilon = epsilon;
    const double root = std::sqrt(1.0 + epsilon * epsilon);
    p.eps1 = (1.0 + 2.0 * epsilon) / root - 1.0;
    p.eps2 = 2.0 - (2.0 - epsilon) / root;
    p.eps3 = p.eps1 - p.eps2;
    p.scale = std::sqrt(5.0 * (1.0 + epsilon * epsilon));
    const double direct = std::sqrt((1.0 + 2.0 * epsilon) * (1.0 + 2.0 * epsilon) +
                                    (2.0 - epsilon) * (2.0 - epsilon));
    if (std::fabs(p.scale - direct) > 1e-12)
        throw std::logic_error("game params: normalization identity violated");
    return p;
}

double GameParams::decision_threshold() const { return (3.0 + 0.5 * eps3) / kSqrt5; }

GameSample sample_game5(double epsilon, std::size_t n, Hypothesis which, RandomSource& rng) {
    if (n < 2)
        throw std::invalid_argument("sample_game5: n must be >= 2");
    const GameParams p = GameParams::from_epsilon(epsilon);
    auto tuple = orthogonal_tuple(n, 2, rng);
    PlantedPair pair;
    pair.u = std::move(tuple.vectors[0]);
    pair.v = std::move(tuple.vectors[1]);
    if (which == Hypothesis::P1) {
        pair.alpha = 1.0 / kSqrt5;
        pair.beta = 2.0 / kSqrt5;
    } else {
        pair.alpha = (1.0 + p.eps1) / kSqrt5;
        pair.beta = (2.0 - p.eps2) / kSqrt5;
    }
    std::vector<PlantedTerm> terms;
    terms.push_back({pair.alpha, pair.u});
    terms.push_back({pair.beta, *pair.v});
    return GameSample{ImplicitMatrix::planted(n, std::move(terms)), std::move(pair)};
}

GameSample sample_game6(double epsilon, std::size_t n, Hypothesis which, RandomSource& rng) {
    if (n == 0)
        throw std::invalid_argument("sample_game6: n must be >= 1");
    require_epsilon(epsilon);
    PlantedPair pair;
    pair.u = uniform_unit_vector(n, rng);
    pair.alpha = (which == Hypothesis::P1) ? 1.0 : 1.0 + 3.0 * epsilon;
    std::vector<PlantedTerm> terms;
    terms.push_back({pair.alpha, pair.u});
    return GameSample{ImplicitMatrix::planted(n, std::move(terms)), std::move(pair)};
}

std::pair<double, double> strong_query(const PlantedPair& pair, std::span<const double> x) {
    if (x.size() != pair.u.size())
        throw std::invalid_argument("strong_query: dimension mismatch");
    if (std::fabs(norm2(x) - 1.0) > 1e-9)
        throw std::invalid_argument("strong_query: query must be a unit vector");
    const double first = std::sqrt(pair.alpha) * dot(pair.u, x);
    const double second = pair.rank1() ? 0.0 : std::sqrt(pair.beta) * dot(*pair.v, x);
    return {first, second};
}

double scaled_projection_query(const PlantedPair& pair, std::span<const double> x) {
    if (!pair.rank1())
        throw std::invalid_argument("scaled_projection_query: requires a rank-1 pair");
    if (x.size() != pair.u.size())
        throw std::invalid_argument("scaled_projection_query: dimension mismatch");
    if (std::fabs(norm2(x) - 1.0) > 1e-9)
        throw std::invalid_argument("scaled_projection_query: query must be a unit vector");
    // trace(A) = alpha for a rank-1 planted matrix with a unit direction
    return pair.alpha * dot(pair.u, x);
}

Hypothesis variance_distinguisher(const TraceEstimateFn& estimate, const ImplicitMatrix& a,
                                  double epsilon, RandomSource& rng) {
    const GameParams p = GameParams::from_epsilon(epsilon);
    const double value = estimate(a, rng);
    return value <= p.decision_threshold() ? Hypothesis::P1 : Hypothesis::P2;
}

double variance_distinguisher_game(const TraceEstimateFn& estimate, double epsilon,
                                   std::size_t n, std::size_t rounds,
                                   const RandomSource& base, int workers) {
    if (rounds == 0)
        throw std::invalid_argument("variance_distinguisher_game: rounds must be >= 1");
    (void)workers; // rounds are cheap; run sequentially with per-round streams
    std::size_t correct = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        RandomSource rng(base.seed(), derive_stream(base.stream_id(), r));
        const Hypothesis truth = (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
        GameSample sample = sample_game5(epsilon, n, truth, rng);
        if (variance_distinguisher(estimate, sample.matrix, epsilon, rng) == truth)
            ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(rounds);
}

double lr_crossing_radius2(double sigma0, double sigma1, std::size_t k) {
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0) || sigma0 == sigma1)
        throw std::invalid_argument("lr_crossing_radius2: need distinct positive scales");
    const double v0 = sigma0 * sigma0, v1 = sigma1 * sigma1;
    return static_cast<double>(k) * std::log(v1 / v0) / (1.0 / v0 - 1.0 / v1);
}

Hypothesis lr_distinguisher(std::span<const double> sample, double sigma0, double sigma1) {
    if (sample.empty())
        throw std::invalid_argument("lr_distinguisher: empty sample");
    const double crossing = lr_crossing_radius2(sigma0, sigma1, sample.size());
    double s = 0.0;
    for (double z : sample)
        s += z * z;
    const bool big_is_p2 = sigma1 > sigma0;
    return (s >= crossing) == big_is_p2 ? Hypothesis::P2 : Hypothesis::P1;
}

namespace {

double log_lr_block(double s, std::size_t k, double v1, double v2) {
    // log f2 - log f1 for N(0, v)^k densities evaluated at squared norm s
    return -0.5 * static_cast<double>(k) * std::log(v2 / v1) - 0.5 * s * (1.0 / v2 - 1.0 / v1);
}

} // namespace

Hypothesis bivariate_lr_distinguisher(std::span<const double> a, std::span<const double> b,
                                      double va1, double vb1, double va2, double vb2) {
    if (a.empty() || a.size() != b.size())
        throw std::invalid_argument("bivariate_lr_distinguisher: block size mismatch");
    double sa = 0.0, sb = 0.0;
    for (double z : a)
        sa += z * z;
    for (double z : b)
        sb += z * z;
    const double loglr =
        log_lr_block(sa, a.size(), va1, va2) + log_lr_block(sb, b.size(), vb1, vb2);
    return loglr >= 0.0 ? Hypothesis::P2 : Hypothesis::P1;
}

std::vector<double> game6_round_responses(double epsilon, Hypothesis which, std::size_t n,
                                          std::size_t k, RandomSource& rng) {
    require_epsilon(epsilon);
    if (k == 0 || k > n)
        throw std::invalid_argument("game6 round: need 1 <= k <= n");
    const double tau = (which == Hypothesis::P1) ? 1.0 : 1.0 + 3.0 * epsilon;
    std::vector<double> z = projected_unit_coords(n, k, rng);
    scale_in_place(z, tau);
    return z;
}

std::vector<double> game6_round_responses_explicit(double epsilon, Hypothesis which,
                                                   std::size_t n, std::size_t k,
                                                   RandomSource& rng) {
    GameSample sample = sample_game6(epsilon, n, which, rng);
    auto queries = orthogonal_tuple(n, k, rng);
    std::vector<double> z(k);
    for (std::size_t i = 0; i < k; ++i)
        z[i] = scaled_projection_query(sample.pair, queries.vectors[i]);
    return z;
}

Game5Responses game5_round_responses(double epsilon, Hypothesis which, std::size_t n,
                                     std::size_t k, RandomSource& rng) {
    if (k == 0 || k > n)
        throw std::invalid_argument("game5 round: need 1 <= k <= n");
    if (n < k + 2)
        return game5_round_responses_explicit(epsilon, which, n, k, rng);
    const GameParams p = GameParams::from_epsilon(epsilon);
    const double alpha =
        (which == Hypothesis::P1) ? 1.0 / kSqrt5 : (1.0 + p.eps1) / kSqrt5;
    const double beta =
        (which == Hypothesis::P1) ? 2.0 / kSqrt5 : (2.0 - p.eps2) / kSqrt5;
    auto [uk, vk] = projected_pair_coords(n, k, rng);
    Game5Responses out;
    out.from_u = std::move(uk);
    out.from_v = std::move(vk);
    scale_in_place(out.from_u, std::sqrt(alpha));
    scale_in_place(out.from_v, std::sqrt(beta));
    return out;
}

Game5Responses game5_round_responses_explicit(double epsilon, Hypothesis which, std::size_t n,
                                              std::size_t k, RandomSource& rng) {
    GameSample sample = sample_game5(epsilon, n, which, rng);
    auto queries = orthogonal_tuple(n, k, rng);
    Game5Responses out;
    out.from_u.resize(k);
    out.from_v.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto [a, b] = strong_query(sample.pair, queries.vectors[i]);
        out.from_u[i] = a;
        out.from_v[i] = b;
    }
    return out;
}

double analytic_game6_success(double epsilon, std::size_t k) {
    require_epsilon(epsilon);
    if (k == 0)
        return 0.5;
    return 0.5 + 0.5 * scale_family_tv(1.0, 1.0 + 3.0 * epsilon, k);
}

namespace {

// Rounds draw from streams derived from (base, game, n, k, epsilon), so the
// cells of a sweep are independent even under one base seed while any single
// cell is reproducible in isolation from its report row.
std::uint64_t cell_stream(const RandomSource& base, int game, std::size_t n,
                          std::size_t k, double epsilon) {
    std::uint64_t eps_bits;
    static_assert(sizeof(eps_bits) == sizeof(epsilon));
    std::memcpy(&eps_bits, &epsilon, sizeof(eps_bits));
    std::uint64_t mixed = derive_stream(base.stream_id(), eps_bits);
    mixed = derive_stream(mixed, (static_cast<std::uint64_t>(game) << 48) ^
                                     (static_cast<std::uint64_t>(n) << 24) ^ k);
    return mixed;
}

struct Game6Counts {
    std::uint64_t lr = 0;
    std::uint64_t mean_abs = 0;
    std::uint64_t max_coord = 0;
    std::uint64_t half_energy = 0;
    std::uint64_t rounds = 0;
};

// Round-level game runner with the deterministic block scheme.
Game6Counts run_game6_rounds(double epsilon, std::size_t n, std::size_t k,
                             std::size_t rounds, const RandomSource& base, int workers) {
    const std::uint64_t stream_base = cell_stream(base, 6, n, k, epsilon);
    const double sigma0 = 1.0 / std::sqrt(static_cast<double>(n));
    const double sigma1 = (1.0 + 3.0 * epsilon) * sigma0;

    // analytic thresholds for the heuristic competitors
    const double sqrt_2_over_pi = std::sqrt(2.0 / 3.141592653589793);
    const double mean_abs_threshold = 0.5 * (sigma0 + sigma1) * sqrt_2_over_pi;
    double max_coord_threshold = 0.0;
    if (k > 0) {
        const double q = std::pow(0.5, 1.0 / static_cast<double>(k));
        const double quantile = normal_quantile(0.5 * (1.0 + q));
        max_coord_threshold = 0.5 * (sigma0 + sigma1) * quantile;
    }
    const std::size_t half = k / 2;
    const double half_crossing = half > 0 ? lr_crossing_radius2(sigma0, sigma1, half) : 0.0;

    constexpr std::size_t kBlock = 4096;
    const std::size_t num_blocks = (rounds + kBlock - 1) / kBlock;
    std::vector<Game6Counts> blocks(num_blocks);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t b = first; b < num_blocks; b += stride) {
            Game6Counts counts;
            const std::size_t lo = b * kBlock;
            const std::size_t hi = std::min(lo + kBlock, rounds);
            std::vector<double> z;
            for (std::size_t r = lo; r < hi; ++r) {
                RandomSource rng(base.seed(), derive_stream(stream_base, r));
                const Hypothesis truth =
                    (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
                ++counts.rounds;
                if (k == 0) {
                    // no queries: fair coin
                    const Hypothesis guess =
                        (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
                    if (guess == truth)
                        ++counts.lr;
                    continue;
                }
                z = game6_round_responses(epsilon, truth, n, k, rng);

                if (lr_distinguisher(z, sigma0, sigma1) == truth)
                    ++counts.lr;

                double sum_abs = 0.0, max_abs = 0.0, head_energy = 0.0;
                for (std::size_t i = 0; i < k; ++i) {
                    const double v = std::fabs(z[i]);
                    sum_abs += v;
                    max_abs = std::max(max_abs, v);
                    if (i < half)
                        head_energy += z[i] * z[i];
                }
                const Hypothesis guess_mean =
                    sum_abs / static_cast<double>(k) > mean_abs_threshold ? Hypothesis::P2
                                                                          : Hypothesis::P1;
                if (guess_mean == truth)
                    ++counts.mean_abs;
                const Hypothesis guess_max =
                    max_abs > max_coord_threshold ? Hypothesis::P2 : Hypothesis::P1;
                if (guess_max == truth)
                    ++counts.max_coord;
                Hypothesis guess_half;
                if (half == 0)
                    guess_half = (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
                else
                    guess_half = head_energy >= half_crossing ? Hypothesis::P2 : Hypothesis::P1;
                if (guess_half == truth)
                    ++counts.half_energy;
            }
            blocks[b] = counts;
        }
    };

    if (workers <= 1 || num_blocks == 1) {
        work(0, 1);
    } else {
        const std::size_t nthreads = std::min<std::size_t>(workers, num_blocks);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nthreads; ++w)
            pool.emplace_back(work, w, nthreads);
        for (auto& th : pool)
            th.join();
    }

    Game6Counts total;
    for (const auto& bc : blocks) {
        total.lr += bc.lr;
        total.mean_abs += bc.mean_abs;
        total.max_coord += bc.max_coord;
        total.half_energy += bc.half_energy;
        total.rounds += bc.rounds;
    }
    return total;
}

} // namespace

Game6CellResult run_game6_cell(double epsilon, std::size_t n, std::size_t k,
                               std::size_t rounds, const RandomSource& base, int workers) {
    require_epsilon(epsilon);
    if (rounds == 0)
        throw std::invalid_argument("run_game6_cell: rounds must be >= 1");
    if (k > n)
        throw std::invalid_argument("run_game6_cell: k exceeds n");
    const Game6Counts counts = run_game6_rounds(epsilon, n, k, rounds, base, workers);
    const double nr = static_cast<double>(counts.rounds);

    Game6CellResult out;
    out.lr.game = 6;
    out.lr.n = n;
    out.lr.k = k;
    out.lr.epsilon = epsilon;
    out.lr.trials = counts.rounds;
    out.lr.success_rate = static_cast<double>(counts.lr) / nr;
    out.lr.stderr_success =
        std::sqrt(out.lr.success_rate * (1.0 - out.lr.success_rate) / nr);
    out.lr.analytic_ceiling = (k == 0) ? 0.5 : analytic_game6_success(epsilon, k);
    out.lr.seed = base.seed();
    out.success_mean_abs = static_cast<double>(counts.mean_abs) / nr;
    out.success_max_coord = static_cast<double>(counts.max_coord) / nr;
    out.success_half_energy = static_cast<double>(counts.half_energy) / nr;
    return out;
}

GameReport strong_query_game(double epsilon, std::size_t n, std::size_t k, int game,
                             std::size_t rounds, const RandomSource& base, int workers) {
    require_epsilon(epsilon);
    if (rounds == 0)
        throw std::invalid_argument("strong_query_game: rounds must be >= 1");
    if (k > n)
        throw std::invalid_argument("strong_query_game: k exceeds n");
    if (game == 6)
        return run_game6_cell(epsilon, n, k, rounds, base, workers).lr;
    if (game != 5)
        throw std::invalid_argument("strong_query_game: game must be 5 or 6");

    const GameParams p = GameParams::from_epsilon(epsilon);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double va1 = inv_n / kSqrt5;
    const double vb1 = 2.0 * inv_n / kSqrt5;
    const double va2 = (1.0 + p.eps1) * inv_n / kSqrt5;
    const double vb2 = (2.0 - p.eps2) * inv_n / kSqrt5;

    (void)workers;
    const std::uint64_t stream_base = cell_stream(base, 5, n, k, epsilon);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        RandomSource rng(base.seed(), derive_stream(stream_base, r));
        const Hypothesis truth = (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
        Hypothesis guess;
        if (k == 0) {
            guess = (rng.next_u64() & 1ULL) ? Hypothesis::P2 : Hypothesis::P1;
        } else {
            const Game5Responses resp = game5_round_responses(epsilon, truth, n, k, rng);
            guess = bivariate_lr_distinguisher(resp.from_u, resp.from_v, va1, vb1, va2, vb2);
        }
        if (guess == truth)
            ++correct;
    }

    GameReport rep;
    rep.game = 5;
    rep.n = n;
    rep.k = k;
    rep.epsilon = epsilon;
    rep.trials = rounds;
    rep.success_rate = static_cast<double>(correct) / static_cast<double>(rounds);
    rep.stderr_success =
        std::sqrt(rep.success_rate * (1.0 - rep.success_rate) / static_cast<double>(rounds));
    // Pinsker ceiling from the Gaussian surrogate KL (upper bound, not exact)
    if (k > 0) {
        std::vector<double> d0, d1;
        d0.insert(d0.end(), k, va1);
        d0.insert(d0.end(), k, vb1);
        d1.insert(d1.end(), k, va2);
        d1.insert(d1.end(), k, vb2);
        rep.analytic_ceiling =
            0.5 + 0.5 * std::min(1.0, pinsker_tv_upper(kl_zero_mean_gaussians(d0, d1)));
    } else {
        rep.analytic_ceiling = 0.5;
    }
    rep.seed = base.seed();
    return rep;
}

KStarResult empirical_query_complexity(double epsilon, double delta) {
    require_epsilon(epsilon);
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("empirical_query_complexity: delta must lie in (0, 1/2)");
    const double target = 1.0 - delta;
    std::size_t hi = 1;
    while (analytic_game6_success(epsilon, hi) < target) {
        hi *= 2;
        if (hi > (1ULL << 40))
            throw std::runtime_error("empirical_query_complexity: k search diverged");
    }
    std::size_t lo = hi / 2; // success(lo) < target <= success(hi), lo = 0 handled below
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (mid == 0 || analytic_game6_success(epsilon, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    KStarResult out;
    out.k_star = hi;
    out.success_at_k_star = analytic_game6_success(epsilon, hi);
    return out;
}

} // namespace tracekit
