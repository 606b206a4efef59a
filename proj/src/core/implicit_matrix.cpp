#include "core/implicit_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tracekit {

ImplicitMatrix ImplicitMatrix::diagonal(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("diagonal matrix: empty value list");
    ImplicitMatrix m;
    m.n_ = values.size();
    m.node_ = DiagonalNode{std::move(values)};
    return m;
}

ImplicitMatrix ImplicitMatrix::dense(Matrix entries) {
    const std::size_t n = entries.rows();
    if (n == 0 || entries.cols() != n)
        throw std::invalid_argument("dense matrix: entries must be square and nonempty");
    double maxabs = 0.0;
    for (double v : entries.data())
        maxabs = std::max(maxabs, std::fabs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(entries(i, j) - entries(j, i)) > 1e-9 * std::max(1.0, maxabs))
                throw std::invalid_argument("dense matrix: entries are not symmetric");
    ImplicitMatrix m;
    m.n_ = n;
    m.node_ = DenseNode{std::move(entries)};
    return m;
}

ImplicitMatrix ImplicitMatrix::planted(std::size_t n, std::vector<PlantedTerm> terms) {
    if (n == 0)
        throw std::invalid_argument("planted matrix: n must be >= 1");
    for (std::size_t a = 0; a < terms.size(); ++a) {
        if (terms[a].direction.size() != n)
            throw std::invalid_argument("planted matrix: direction length != n");
        if (std::fabs(norm2(terms[a].direction) - 1.0) > kOrthoTol)
            throw std::invalid_argument("planted matrix: direction " + std::to_string(a) +
                                        " is not unit norm");
        for (std::size_t b = 0; b < a; ++b)
            if (std::fabs(dot(terms[a].direction, terms[b].direction)) > kOrthoTol)
                throw std::invalid_argument("planted matrix: directions are not orthogonal");
    }
    ImplicitMatrix m;
    m.n_ = n;
    m.node_ = PlantedNode{std::move(terms)};
    return m;
}

ImplicitMatrix ImplicitMatrix::rotated(ImplicitMatrix inner, Matrix rotation,
                                       std::optional<std::uint64_t> rotation_seed) {
    if (rotation.rows() != inner.dim() || rotation.cols() != inner.dim())
        throw std::invalid_argument("rotated matrix: rotation shape mismatch");
    if (orthogonality_residual(rotation) > kOrthoTol)
        throw std::invalid_argument("rotated matrix: rotation is not orthogonal");
    ImplicitMatrix m;
    m.n_ = inner.dim();
    m.node_ = RotatedNode{std::make_shared<const ImplicitMatrix>(std::move(inner)),
                          std::move(rotation), rotation_seed};
    return m;
}

ImplicitMatrix::Kind ImplicitMatrix::kind() const {
    switch (node_.index()) {
    case 0: return Kind::Diagonal;
    case 1: return Kind::Planted;
    case 2: return Kind::Dense;
    default: return Kind::Rotated;
    }
}

double ImplicitMatrix::quadratic_form(std::span<const double> x) const {
    if (x.size() != n_)
        throw std::invalid_argument("quadratic_form: query length " +
                                    std::to_string(x.size()) + " != matrix dimension " +
                                    std::to_string(n_));
    if (const auto* d = std::get_if<DiagonalNode>(&node_)) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            s += d->values[i] * x[i] * x[i];
        return s;
    }
    if (const auto* p = std::get_if<PlantedNode>(&node_)) {
        double s = 0.0;
        for (const auto& term : p->terms) {
            const double proj = dot(term.direction, x);
            s += term.coefficient * proj * proj;
        }
        return s;
    }
    if (const auto* dn = std::get_if<DenseNode>(&node_)) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            s += x[i] * dot(dn->entries.row(i), x);
        return s;
    }
    const auto& r = std::get<RotatedNode>(node_);
    return r.inner->quadratic_form(r.rotation.apply(x)); // (Qx)^T A (Qx)
}

double ImplicitMatrix::trace() const {
    if (const auto* d = std::get_if<DiagonalNode>(&node_)) {
        double s = 0.0;
        for (double v : d->values)
            s += v;
        return s;
    }
    if (const auto* p = std::get_if<PlantedNode>(&node_)) {
        double s = 0.0;
        for (const auto& term : p->terms)
            s += term.coefficient;
        return s;
    }
    if (const auto* dn = std::get_if<DenseNode>(&node_)) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            s += dn->entries(i, i);
        return s;
    }
    return std::get<RotatedNode>(node_).inner->trace();
}

double ImplicitMatrix::frobenius_norm() const {
    if (const auto* d = std::get_if<DiagonalNode>(&node_)) {
        double s = 0.0;
        for (double v : d->values)
            s += v * v;
        return std::sqrt(s);
    }
    if (const auto* p = std::get_if<PlantedNode>(&node_)) {
        double s = 0.0;
        for (const auto& term : p->terms)
            s += term.coefficient * term.coefficient;
        return std::sqrt(s);
    }
    if (const auto* dn = std::get_if<DenseNode>(&node_)) {
        double s = 0.0;
        for (double v : dn->entries.data())
            s += v * v;
        return std::sqrt(s);
    }
    return std::get<RotatedNode>(node_).inner->frobenius_norm();
}

std::vector<double> ImplicitMatrix::diagonal() const {
    if (const auto* d = std::get_if<DiagonalNode>(&node_))
        return d->values;
    if (const auto* p = std::get_if<PlantedNode>(&node_)) {
        std::vector<double> diag(n_, 0.0);
        for (const auto& term : p->terms)
            for (std::size_t i = 0; i < n_; ++i)
                diag[i] += term.coefficient * term.direction[i] * term.direction[i];
        return diag;
    }
    if (const auto* dn = std::get_if<DenseNode>(&node_)) {
        std::vector<double> diag(n_);
        for (std::size_t i = 0; i < n_; ++i)
            diag[i] = dn->entries(i, i);
        return diag;
    }
    const auto& r = std::get<RotatedNode>(node_);
    std::vector<double> diag(n_);
    for (std::size_t i = 0; i < n_; ++i)
        diag[i] = r.inner->quadratic_form(r.rotation.column(i)); // (Q^T A Q)_ii
    return diag;
}

double ImplicitMatrix::diagonal_sum_of_squares() const {
    double s = 0.0;
    for (double v : diagonal())
        s += v * v;
    return s;
}

Matrix ImplicitMatrix::materialize(std::size_t limit) const {
    if (n_ > limit)
        throw std::invalid_argument("materialize: dimension " + std::to_string(n_) +
                                    " exceeds dense limit " + std::to_string(limit));
    Matrix out(n_, n_);
    if (const auto* d = std::get_if<DiagonalNode>(&node_)) {
        for (std::size_t i = 0; i < n_; ++i)
            out(i, i) = d->values[i];
        return out;
    }
    if (const auto* p = std::get_if<PlantedNode>(&node_)) {
        for (const auto& term : p->terms)
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j)
                    out(i, j) += term.coefficient * term.direction[i] * term.direction[j];
        return out;
    }
    if (const auto* dn = std::get_if<DenseNode>(&node_))
        return dn->entries;
    const auto& r = std::get<RotatedNode>(node_);
    const Matrix inner = r.inner->materialize(limit);
    // Q^T M Q
    Matrix mq(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto col = r.rotation.column(i);
        const auto mcol = inner.apply(col);
        for (std::size_t rrow = 0; rrow < n_; ++rrow)
            mq(rrow, i) = mcol[rrow];
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const auto col = mq.column(i);
        const auto qtc = r.rotation.apply_transpose(col);
        for (std::size_t rrow = 0; rrow < n_; ++rrow)
            out(rrow, i) = qtc[rrow];
    }
    return out;
}

ImplicitMatrix ImplicitMatrix::similarity_transform(Matrix q) const {
    return rotated(*this, std::move(q));
}

const std::vector<double>* ImplicitMatrix::as_diagonal() const {
    const auto* d = std::get_if<DiagonalNode>(&node_);
    return d ? &d->values : nullptr;
}

const std::vector<PlantedTerm>* ImplicitMatrix::as_planted() const {
    const auto* p = std::get_if<PlantedNode>(&node_);
    return p ? &p->terms : nullptr;
}

const Matrix* ImplicitMatrix::as_dense() const {
    const auto* d = std::get_if<DenseNode>(&node_);
    return d ? &d->entries : nullptr;
}

std::optional<ImplicitMatrix::RotatedView> ImplicitMatrix::as_rotated() const {
    const auto* r = std::get_if<RotatedNode>(&node_);
    if (!r)
        return std::nullopt;
    return RotatedView{r->inner.get(), &r->rotation, r->rotation_seed};
}

} // namespace tracekit
