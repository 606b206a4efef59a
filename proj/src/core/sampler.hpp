#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace tracekit {

// A tuple of unit-norm query vectors; pairwise angles travel along when the
// tuple was realized from a prescribed angle configuration (upper-triangular
// order: (0,1), (0,2), ..., (k-2,k-1)).
struct QueryTuple {
    std::vector<std::vector<double>> vectors;
    std::optional<std::vector<double>> pairwise_angles;

    std::size_t size() const { return vectors.size(); }
};

// i.i.d. uniform {-1, +1} entries.
std::vector<double> rademacher_vector(std::size_t n, RandomSource& rng);

// i.i.d. N(0, variance) entries.
std::vector<double> gaussian_vector(std::size_t n, double variance, RandomSource& rng);

// Uniform on the unit sphere (normalized Gaussian).
std::vector<double> uniform_unit_vector(std::size_t n, RandomSource& rng);

// First k rows of a Haar orthogonal matrix: Gaussian rows + Gram-Schmidt with
// re-orthogonalization. Requires 1 <= k <= n.
QueryTuple orthogonal_tuple(std::size_t n, std::size_t k, RandomSource& rng);

// Full Haar orthogonal matrix (rows are an orthogonal_tuple with k = n).
Matrix haar_orthogonal_matrix(std::size_t n, RandomSource& rng);

// Two unit vectors with inner product cos(theta): draws an orthogonal pair
// (y_i, y_j) and returns (y_i, y_i cos theta + y_j sin theta).
std::pair<std::vector<double>, std::vector<double>>
angled_pair(std::size_t n, double theta, RandomSource& rng);

// k unit vectors with prescribed pairwise angles (upper-triangular order):
// the Gram matrix cos(theta_ij) is PSD-factored and the factor applied to a
// Haar-random orthonormal frame. Infeasible angle sets are rejected.
QueryTuple angled_tuple(std::size_t n, std::vector<double> pairwise_angles,
                        RandomSource& rng);

// Shared realization step: rows of `factor` combine frame vectors into the
// final queries.
std::vector<std::vector<double>> combine_frame(const Matrix& factor, std::size_t n,
                                               RandomSource& rng);

// First k coordinates of a uniform unit vector in R^n, sampled exactly in
// O(k): the remaining squared norm is a single chi-square draw.
std::vector<double> projected_unit_coords(std::size_t n, std::size_t k, RandomSource& rng);

// First k coordinates of a Haar-random orthonormal pair (u, v) in R^n,
// sampled exactly in O(k) via a Bartlett-decomposed 2x2 Wishart for the
// unseen coordinates. Requires n >= k + 2.
std::pair<std::vector<double>, std::vector<double>>
projected_pair_coords(std::size_t n, std::size_t k, RandomSource& rng);

} // namespace tracekit
