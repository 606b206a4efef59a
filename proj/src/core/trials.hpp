#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/estimator.hpp"
#include "core/implicit_matrix.hpp"
#include "core/rng.hpp"

namespace tracekit {

// Aggregated Monte Carlo statistics for one (estimator, matrix) cell. The
// variance is centered at the known true trace, not the sample mean.
struct ExperimentReport {
    std::string estimator_id;
    std::string matrix_id;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
    std::optional<double> success_rate;
    std::optional<double> epsilon;
};

// Derive the stream id for one trial from a base stream; trial runners use
// this so results do not depend on the worker count.
std::uint64_t derive_stream(std::uint64_t base, std::uint64_t index);

// Runs trial index -> value over partitioned streams; deterministic for any
// worker count (fixed-size blocks merged in block order).
ExperimentReport run_trials(const LinearEstimator& est, const ImplicitMatrix& a,
                            std::size_t trials, const RandomSource& base, int workers = 1);

// Closed-form per-matrix variance for the kinds that have one.
double analytic_variance(EstimatorKind kind, const ImplicitMatrix& a, std::size_t k);

struct WorstCaseResult {
    double variance = 0.0;
    std::string argmax_matrix_id;
    std::vector<ExperimentReport> reports;
};

// Empirical proxy for the sup over unit-Frobenius matrices: the max of the
// per-matrix empirical variances over a documented family.
WorstCaseResult worst_case_variance(const LinearEstimator& est,
                                    const std::vector<std::pair<std::string, ImplicitMatrix>>& family,
                                    std::size_t trials, const RandomSource& base,
                                    int workers = 1);

struct EpsDeltaResult {
    ExperimentReport report;
    double success_ci95 = 0.0; // normal approximation, Wilson below 30 hits/misses
};

// Fraction of trials with |value - trace| <= epsilon * trace; requires a
// positive trace (the multiplicative guarantee is undefined otherwise).
EpsDeltaResult eps_delta_success(const LinearEstimator& est, const ImplicitMatrix& a,
                                 double epsilon, std::size_t trials,
                                 const RandomSource& base, int workers = 1);

} // namespace tracekit
