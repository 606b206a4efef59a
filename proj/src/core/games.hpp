#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "core/implicit_matrix.hpp"
#include "core/rng.hpp"

namespace tracekit {

// Derived constants of the rank-2 distinguishing game. With scale
// C = sqrt((1+2e)^2 + (2-e)^2) = sqrt(5(1+e^2)), the alternative matrix is
// (1/sqrt(5)) ((1+eps1) u u^T + (2-eps2) v v^T) and the trace gap is
// eps3/sqrt(5).
struct GameParams {
    double epsilon;
    double eps1;
    double eps2;
    double eps3;
    double scale;

    static GameParams from_epsilon(double epsilon);
    double decision_threshold() const; // (3 + eps3/2) / sqrt(5)
};

// Hidden planted structure behind a game matrix: A = alpha u u^T + beta v v^T
// (v and beta absent for rank-1 games).
struct PlantedPair {
    std::vector<double> u;
    std::optional<std::vector<double>> v;
    double alpha = 0.0;
    double beta = 0.0;

    bool rank1() const { return !v.has_value(); }
};

enum class Hypothesis { P1, P2 };

struct GameSample {
    ImplicitMatrix matrix;
    PlantedPair pair;
};

// Rank-2 game: P1 ~ (u u^T + 2 v v^T)/sqrt(5), P2 ~ ((1+eps1) u u^T +
// (2-eps2) v v^T)/sqrt(5) over Haar-random orthonormal (u, v). Both supports
// have unit Frobenius norm.
GameSample sample_game5(double epsilon, std::size_t n, Hypothesis which, RandomSource& rng);

// Rank-1 game: P1 ~ u u^T, P2 ~ (1+3 epsilon) u u^T over uniform unit u.
GameSample sample_game6(double epsilon, std::size_t n, Hypothesis which, RandomSource& rng);

// Adversary-weakening oracle: the projections of the scaled planted vectors
// (sqrt(alpha) <u,x>, sqrt(beta) <v,x>) instead of the quadratic form.
std::pair<double, double> strong_query(const PlantedPair& pair, std::span<const double> x);

// Rank-1 oracle returning trace(A) * <u,x>.
double scaled_projection_query(const PlantedPair& pair, std::span<const double> x);

using TraceEstimateFn = std::function<double(const ImplicitMatrix&, RandomSource&)>;

// Thresholds one estimate of the trace at (3 + eps3/2)/sqrt(5).
Hypothesis variance_distinguisher(const TraceEstimateFn& estimate, const ImplicitMatrix& a,
                                  double epsilon, RandomSource& rng);

// Plays the full rank-2 game with a fair hidden hypothesis; returns the
// empirical success rate of the variance distinguisher.
double variance_distinguisher_game(const TraceEstimateFn& estimate, double epsilon,
                                   std::size_t n, std::size_t rounds,
                                   const RandomSource& base, int workers = 1);

// Density crossing radius (squared norm) of N(0,s0^2)^k vs N(0,s1^2)^k.
double lr_crossing_radius2(double sigma0, double sigma1, std::size_t k);

// Optimal single-sample test for the scale family: P2 iff |z|^2 >= crossing.
Hypothesis lr_distinguisher(std::span<const double> sample, double sigma0, double sigma1);

// Exact two-block likelihood-ratio rule for the rank-2 reduction, with
// per-coordinate variances (va, vb) under each hypothesis.
Hypothesis bivariate_lr_distinguisher(std::span<const double> a, std::span<const double> b,
                                      double va1, double vb1, double va2, double vb2);

struct GameReport {
    int game = 6;
    std::size_t n = 0;
    std::size_t k = 0;
    double epsilon = 0.0;
    std::optional<double> delta;
    std::size_t trials = 0;
    double success_rate = 0.0;
    double stderr_success = 0.0;
    double analytic_ceiling = 0.0; // 1/2 + 1/2 TV of the Gaussian surrogate
    std::uint64_t seed = 0;
};

// Success rates of the four implemented rank-1 distinguishers on a shared
// round sample (likelihood ratio plus three deliberately weaker heuristics).
struct Game6CellResult {
    GameReport lr;
    double success_mean_abs = 0.0;
    double success_max_coord = 0.0;
    double success_half_energy = 0.0;
};

Game6CellResult run_game6_cell(double epsilon, std::size_t n, std::size_t k,
                               std::size_t rounds, const RandomSource& base, int workers = 1);

// Full strong-query game: hypothesis drawn fairly, planted pair drawn, k
// orthogonal strong queries made, responses fed to the optimal rule.
GameReport strong_query_game(double epsilon, std::size_t n, std::size_t k, int game,
                             std::size_t rounds, const RandomSource& base, int workers = 1);

// Analytic success of the optimal rank-1 strong-query test under the Gaussian
// surrogate (scale ratio 1 + 3 epsilon); independent of n.
double analytic_game6_success(double epsilon, std::size_t k);

struct KStarResult {
    std::size_t k_star = 0;
    double success_at_k_star = 0.0;
};

// Smallest k whose analytic success reaches 1 - delta (binary search on the
// monotone surrogate curve).
KStarResult empirical_query_complexity(double epsilon, double delta);

// One round of strong-query responses. The default path samples the exact
// joint law of the projections in O(k) (planted pair and queries are never
// observed beyond their mutual projections); the explicit path materializes
// the pair and k orthogonal queries in R^n. Tests check the two agree in
// distribution.
std::vector<double> game6_round_responses(double epsilon, Hypothesis which, std::size_t n,
                                          std::size_t k, RandomSource& rng);
std::vector<double> game6_round_responses_explicit(double epsilon, Hypothesis which,
                                                   std::size_t n, std::size_t k,
                                                   RandomSource& rng);

struct Game5Responses {
    std::vector<double> from_u; // sqrt(alpha) <u, x_i>
    std::vector<double> from_v; // sqrt(beta)  <v, x_i>
};

Game5Responses game5_round_responses(double epsilon, Hypothesis which, std::size_t n,
                                     std::size_t k, RandomSource& rng);
Game5Responses game5_round_responses_explicit(double epsilon, Hypothesis which, std::size_t n,
                                              std::size_t k, RandomSource& rng);

} // namespace tracekit
