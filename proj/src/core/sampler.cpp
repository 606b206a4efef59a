#include "core/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace tracekit {

std::vector<double> rademacher_vector(std::size_t n, RandomSource& rng) {
    if (n == 0)
        throw std::invalid_argument("rademacher_vector: n must be >= 1");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = (rng.next_u64() & 1ULL) ? 1.0 : -1.0;
    return x;
}

std::vector<double> gaussian_vector(std::size_t n, double variance, RandomSource& rng) {
    if (n == 0)
        throw std::invalid_argument("gaussian_vector: n must be >= 1");
    if (!(variance > 0.0))
        throw std::invalid_argument("gaussian_vector: variance must be positive");
    const double sd = std::sqrt(variance);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = sd * rng.next_gaussian();
    return x;
}

std::vector<double> uniform_unit_vector(std::size_t n, RandomSource& rng) {
    if (n == 0)
        throw std::invalid_argument("uniform_unit_vector: n must be >= 1");
    std::vector<double> x(n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = rng.next_gaussian();
        const double nrm = norm2(x);
        if (nrm > 1e-12) {
            scale_in_place(x, 1.0 / nrm);
            return x;
        }
    }
}

QueryTuple orthogonal_tuple(std::size_t n, std::size_t k, RandomSource& rng) {
    if (k == 0 || k > n)
        throw std::invalid_argument("orthogonal_tuple: need 1 <= k <= n");
    QueryTuple tuple;
    tuple.vectors.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (;;) {
            std::vector<double> g(n);
            for (std::size_t c = 0; c < n; ++c)
                g[c] = rng.next_gaussian();
            // two Gram-Schmidt passes keep residual inner products ~1e-15
            // even at n = 4096, k = 64
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t j = 0; j < i; ++j)
                    axpy(g, dot(g, tuple.vectors[j]), tuple.vectors[j]);
            const double nrm = norm2(g);
            if (nrm < 1e-12)
                continue; // degenerate pivot: redraw the row
            scale_in_place(g, 1.0 / nrm);
            tuple.vectors.push_back(std::move(g));
            break;
        }
    }
    return tuple;
}

Matrix haar_orthogonal_matrix(std::size_t n, RandomSource& rng) {
    QueryTuple t = orthogonal_tuple(n, n, rng);
    Matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            q(i, j) = t.vectors[i][j];
    return q;
}

std::pair<std::vector<double>, std::vector<double>>
angled_pair(std::size_t n, double theta, RandomSource& rng) {
    if (n < 2)
        throw std::invalid_argument("angled_pair: n must be >= 2");
    QueryTuple t = orthogonal_tuple(n, 2, rng);
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> second(n);
    for (std::size_t i = 0; i < n; ++i)
        second[i] = c * t.vectors[0][i] + s * t.vectors[1][i];
    return {std::move(t.vectors[0]), std::move(second)};
}

std::vector<std::vector<double>> combine_frame(const Matrix& factor, std::size_t n,
                                               RandomSource& rng) {
    const std::size_t k = factor.rows();
    const auto frame = orthogonal_tuple(n, k, rng).vectors;
    std::vector<std::vector<double>> queries;
    queries.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> x(n, 0.0);
        for (std::size_t m = 0; m < k; ++m) {
            const double c = factor(i, m);
            if (c == 0.0)
                continue;
            for (std::size_t col = 0; col < n; ++col)
                x[col] += c * frame[m][col];
        }
        queries.push_back(std::move(x));
    }
    return queries;
}

QueryTuple angled_tuple(std::size_t n, std::vector<double> pairwise_angles,
                        RandomSource& rng) {
    std::size_t k = 1;
    while (k * (k - 1) / 2 < pairwise_angles.size())
        ++k;
    if (k * (k - 1) / 2 != pairwise_angles.size())
        throw std::invalid_argument("angled_tuple: angle count is not k(k-1)/2");
    if (k > n)
        throw std::invalid_argument("angled_tuple: need k <= n");
    Matrix gram = Matrix::identity(k);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j, ++idx) {
            const double c = std::cos(pairwise_angles[idx]);
            gram(i, j) = c;
            gram(j, i) = c;
        }
    QueryTuple tuple;
    tuple.vectors = combine_frame(psd_factor(gram), n, rng);
    tuple.pairwise_angles = std::move(pairwise_angles);
    return tuple;
}

std::vector<double> projected_unit_coords(std::size_t n, std::size_t k, RandomSource& rng) {
    if (k == 0 || k > n)
        throw std::invalid_argument("projected_unit_coords: need 1 <= k <= n");
    std::vector<double> g(k);
    double head = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        g[i] = rng.next_gaussian();
        head += g[i] * g[i];
    }
    const double tail = (k == n) ? 0.0 : rng.next_chi_square(static_cast<double>(n - k));
    const double inv = 1.0 / std::sqrt(head + tail);
    scale_in_place(g, inv);
    return g;
}

std::pair<std::vector<double>, std::vector<double>>
projected_pair_coords(std::size_t n, std::size_t k, RandomSource& rng) {
    if (k == 0 || n < k + 2)
        throw std::invalid_argument("projected_pair_coords: need 1 <= k <= n - 2");
    std::vector<double> g(k), h(k);
    double gg = 0.0, hh = 0.0, gh = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        g[i] = rng.next_gaussian();
        h[i] = rng.next_gaussian();
        gg += g[i] * g[i];
        hh += h[i] * h[i];
        gh += g[i] * h[i];
    }
    // Gram matrix of the unseen (n-k)-dimensional tails of two Gaussian
    // vectors, via Bartlett: [[c11, z*sqrt(c11)], [., z^2 + c22]].
    const double df = static_cast<double>(n - k);
    const double c11 = rng.next_chi_square(df);
    const double z = rng.next_gaussian();
    const double c22 = rng.next_chi_square(df - 1.0);
    gg += c11;
    gh += z * std::sqrt(c11);
    hh += z * z + c22;

    // u = g/|g|, v = normalized (h - (h.u) u), restricted to the first k
    const double gnorm = std::sqrt(gg);
    std::vector<double> u(k), v(k);
    for (std::size_t i = 0; i < k; ++i)
        u[i] = g[i] / gnorm;
    const double hu = gh / gnorm;
    const double wnorm = std::sqrt(std::max(hh - hu * hu, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        v[i] = (h[i] - hu * u[i]) / wnorm;
    return {std::move(u), std::move(v)};
}

} // namespace tracekit
