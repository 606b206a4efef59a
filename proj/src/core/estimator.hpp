#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/implicit_matrix.hpp"
#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace tracekit {

enum class EstimatorKind { Rademacher, Gaussian, UnitVector, Orthogonal, Configured };

// One branch of a configured mixture: fixed pairwise angles plus weights.
// Weights are stored as multiples of n (the ambient dimension is unknown
// until estimation time); unbiasedness requires the mixture-averaged weight
// sum to equal 1 in these units.
struct AngleConfiguration {
    double probability;
    std::vector<double> angles;        // k(k-1)/2 radians, order (0,1),(0,2),...
    std::vector<double> weight_over_n; // length k
};

struct EstimateResult {
    double value;
    std::size_t queries_used;
    std::uint64_t seed;
    std::uint64_t stream_id;
};

// A nonadaptive linear trace estimator: a distribution over query tuples and
// weights, with optional rotation / symmetrization wrappers. Immutable; all
// estimation calls are pure given (matrix, rng).
class LinearEstimator {
public:
    static LinearEstimator rademacher(std::size_t k);
    static LinearEstimator gaussian(std::size_t k);
    static LinearEstimator unit_vector(std::size_t k);
    static LinearEstimator orthogonal(std::size_t k);
    static LinearEstimator configured(std::size_t k, std::vector<AngleConfiguration> mixture);

    // Wrapper whose queries are Q times the base queries; weights unchanged.
    LinearEstimator rotated(Matrix q) const;
    // Wrapper drawing a fresh Haar rotation per estimate call.
    LinearEstimator symmetrized() const;

    EstimateResult estimate(const ImplicitMatrix& a, RandomSource& rng) const;

    EstimatorKind kind() const { return kind_; }
    std::size_t queries() const { return k_; }
    const std::string& id() const { return id_; }
    bool is_wrapped() const { return wrapper_ != Wrapper::None; }

private:
    enum class Wrapper { None, Rotated, Symmetrized };

    struct PreparedConfiguration {
        AngleConfiguration config;
        Matrix gram_factor; // L with L L^T = Gram(angles), rows unit norm
    };

    LinearEstimator(EstimatorKind kind, std::size_t k);

    void draw_queries(std::size_t n, RandomSource& rng,
                      std::vector<std::vector<double>>& queries,
                      std::vector<double>& weights) const;

    EstimatorKind kind_;
    std::size_t k_;
    std::string id_;
    std::vector<PreparedConfiguration> mixture_;
    Wrapper wrapper_ = Wrapper::None;
    std::optional<Matrix> rotation_;
};

} // namespace tracekit
