#include "core/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace tracekit {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
    if (x.size() != cols_)
        throw std::invalid_argument("matrix apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        y[i] = dot(row(i), x);
    return y;
}

std::vector<double> Matrix::apply_transpose(std::span<const double> x) const {
    if (x.size() != rows_)
        throw std::invalid_argument("matrix apply_transpose: dimension mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double xi = x[i];
        const double* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j)
            y[j] += r[j] * xi;
    }
    return y;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale_in_place(std::span<double> a, double s) {
    for (double& v : a)
        v *= s;
}

void axpy(std::span<double> a, double s, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= s * b[i];
}

double orthogonality_residual(const Matrix& q) {
    const std::size_t n = q.cols();
    if (q.rows() != n)
        return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += q(r, i) * q(r, j);
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(s - target));
        }
    }
    return worst;
}

bool is_orthogonal(const Matrix& q, double tol) {
    return q.rows() == q.cols() && orthogonality_residual(q) <= tol;
}

double determinant(Matrix m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw std::invalid_argument("determinant: matrix must be square");
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(pivot, col)))
                pivot = r;
        if (m(pivot, col) == 0.0)
            return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(m(pivot, c), m(col, c));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (std::size_t c = col; c < n; ++c)
                m(r, c) -= f * m(col, c);
        }
    }
    return det;
}

SymmetricEigen jacobi_eigen(const Matrix& sym, int max_sweeps) {
    const std::size_t n = sym.rows();
    if (sym.cols() != n)
        throw std::invalid_argument("jacobi_eigen: matrix must be square");
    Matrix a = sym;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off += a(i, j) * a(i, j);
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = a(i, i);
    out.vectors = Matrix(n, n);
    // sort ascending, carrying columns along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (out.values[order[j]] < out.values[order[i]])
                std::swap(order[i], order[j]);
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i)
        sorted[i] = out.values[order[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < n; ++r)
            out.vectors(r, i) = v(r, order[i]);
    out.values = std::move(sorted);
    return out;
}

Matrix psd_factor(const Matrix& gram, double tol) {
    const std::size_t n = gram.rows();
    auto eig = jacobi_eigen(gram);
    double scale = 0.0;
    for (double lam : eig.values)
        scale = std::max(scale, std::fabs(lam));
    const double floor = -tol * std::max(scale, 1.0);
    for (double lam : eig.values)
        if (lam < floor)
            throw std::invalid_argument("psd_factor: matrix is not positive semidefinite");
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double root = std::sqrt(std::max(eig.values[j], 0.0));
        for (std::size_t i = 0; i < n; ++i)
            l(i, j) = eig.vectors(i, j) * root;
    }
    return l;
}

} // namespace tracekit
