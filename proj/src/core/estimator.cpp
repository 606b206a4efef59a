#include "core/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/sampler.hpp"

namespace tracekit {

namespace {

Matrix gram_from_angles(std::size_t k, const std::vector<double>& angles) {
    Matrix g = Matrix::identity(k);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j, ++idx) {
            const double c = std::cos(angles[idx]);
            g(i, j) = c;
            g(j, i) = c;
        }
    }
    return g;
}

} // namespace

LinearEstimator::LinearEstimator(EstimatorKind kind, std::size_t k) : kind_(kind), k_(k) {
    if (k == 0)
        throw std::invalid_argument("estimator: k must be >= 1");
}

LinearEstimator LinearEstimator::rademacher(std::size_t k) {
    LinearEstimator e(EstimatorKind::Rademacher, k);
    e.id_ = "rademacher";
    return e;
}

LinearEstimator LinearEstimator::gaussian(std::size_t k) {
    LinearEstimator e(EstimatorKind::Gaussian, k);
    e.id_ = "gaussian";
    return e;
}

LinearEstimator LinearEstimator::unit_vector(std::size_t k) {
    LinearEstimator e(EstimatorKind::UnitVector, k);
    e.id_ = "unit";
    return e;
}

LinearEstimator LinearEstimator::orthogonal(std::size_t k) {
    LinearEstimator e(EstimatorKind::Orthogonal, k);
    e.id_ = "orthogonal";
    return e;
}

LinearEstimator LinearEstimator::configured(std::size_t k,
                                            std::vector<AngleConfiguration> mixture) {
    LinearEstimator e(EstimatorKind::Configured, k);
    e.id_ = "configured";
    if (mixture.empty())
        throw std::invalid_argument("configured estimator: empty mixture");
    const std::size_t pairs = k * (k - 1) / 2;
    double prob_sum = 0.0;
    double weight_expectation = 0.0;
    for (auto& cfg : mixture) {
        if (cfg.probability < 0.0)
            throw std::invalid_argument("configured estimator: negative probability");
        prob_sum += cfg.probability;
        if (cfg.angles.size() != pairs)
            throw std::invalid_argument("configured estimator: expected k(k-1)/2 angles");
        for (double a : cfg.angles)
            if (!(a >= 0.0 && a <= std::numbers::pi))
                throw std::invalid_argument("configured estimator: angle outside [0, pi]");
        if (cfg.weight_over_n.size() != k)
            throw std::invalid_argument("configured estimator: expected k weights");
        double wsum = 0.0;
        for (double w : cfg.weight_over_n)
            wsum += w;
        weight_expectation += cfg.probability * wsum;
    }
    if (std::fabs(prob_sum - 1.0) > 1e-12)
        throw std::invalid_argument("configured estimator: probabilities must sum to 1");
    if (std::fabs(weight_expectation - 1.0) > 1e-12)
        throw std::invalid_argument(
            "configured estimator: expected weight sum must equal n (1 in units of n)");
    for (auto& cfg : mixture) {
        Matrix factor = psd_factor(gram_from_angles(k, cfg.angles)); // rejects infeasible angles
        e.mixture_.push_back(PreparedConfiguration{std::move(cfg), std::move(factor)});
    }
    return e;
}

LinearEstimator LinearEstimator::rotated(Matrix q) const {
    if (wrapper_ != Wrapper::None)
        throw std::invalid_argument("estimator: already wrapped");
    if (!is_orthogonal(q))
        throw std::invalid_argument("rotated estimator: matrix is not orthogonal");
    LinearEstimator e = *this;
    e.wrapper_ = Wrapper::Rotated;
    e.rotation_ = std::move(q);
    e.id_ = "rot(" + id_ + ")";
    return e;
}

LinearEstimator LinearEstimator::symmetrized() const {
    if (wrapper_ != Wrapper::None)
        throw std::invalid_argument("estimator: already wrapped");
    LinearEstimator e = *this;
    e.wrapper_ = Wrapper::Symmetrized;
    e.id_ = "sym(" + id_ + ")";
    return e;
}

void LinearEstimator::draw_queries(std::size_t n, RandomSource& rng,
                                   std::vector<std::vector<double>>& queries,
                                   std::vector<double>& weights) const {
    queries.clear();
    weights.assign(k_, 0.0);
    const double nn = static_cast<double>(n);
    switch (kind_) {
    case EstimatorKind::Rademacher:
        for (std::size_t i = 0; i < k_; ++i)
            queries.push_back(rademacher_vector(n, rng));
        weights.assign(k_, 1.0 / static_cast<double>(k_));
        return;
    case EstimatorKind::Gaussian:
        for (std::size_t i = 0; i < k_; ++i)
            queries.push_back(gaussian_vector(n, 1.0, rng));
        weights.assign(k_, 1.0 / static_cast<double>(k_));
        return;
    case EstimatorKind::UnitVector:
        for (std::size_t i = 0; i < k_; ++i)
            queries.push_back(uniform_unit_vector(n, rng));
        weights.assign(k_, nn / static_cast<double>(k_));
        return;
    case EstimatorKind::Orthogonal: {
        if (k_ > n)
            throw std::invalid_argument("orthogonal estimator: k exceeds matrix dimension");
        queries = orthogonal_tuple(n, k_, rng).vectors;
        weights.assign(k_, nn / static_cast<double>(k_));
        return;
    }
    case EstimatorKind::Configured: {
        if (k_ > n)
            throw std::invalid_argument("configured estimator: k exceeds matrix dimension");
        const PreparedConfiguration* chosen = &mixture_.back();
        double u = rng.next_double();
        for (const auto& pc : mixture_) {
            u -= pc.config.probability;
            if (u < 0.0) {
                chosen = &pc;
                break;
            }
        }
        // unit queries with prescribed angles: Gram factor applied to a
        // Haar-random orthonormal frame
        queries = combine_frame(chosen->gram_factor, n, rng);
        for (std::size_t i = 0; i < k_; ++i)
            weights[i] = nn * chosen->config.weight_over_n[i];
        return;
    }
    }
    throw std::logic_error("estimator: unknown kind");
}

EstimateResult LinearEstimator::estimate(const ImplicitMatrix& a, RandomSource& rng) const {
    const std::size_t n = a.dim();

    std::optional<Matrix> per_call_rotation;
    if (wrapper_ == Wrapper::Symmetrized)
        per_call_rotation = haar_orthogonal_matrix(n, rng); // one U per estimate
    const Matrix* rot = nullptr;
    if (wrapper_ == Wrapper::Rotated) {
        if (rotation_->rows() != n)
            throw std::invalid_argument("rotated estimator: rotation dimension mismatch");
        rot = &*rotation_;
    } else if (wrapper_ == Wrapper::Symmetrized) {
        rot = &*per_call_rotation;
    }

    std::vector<std::vector<double>> queries;
    std::vector<double> weights;
    draw_queries(n, rng, queries, weights);

    double value = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
        if (rot) {
            const auto rotated_query = rot->apply(queries[i]);
            value += weights[i] * a.quadratic_form(rotated_query);
        } else {
            value += weights[i] * a.quadratic_form(queries[i]);
        }
    }
    return EstimateResult{value, k_, rng.seed(), rng.stream_id()};
}

} // namespace tracekit
