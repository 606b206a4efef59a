#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tracekit {

// Dense row-major matrix, just big enough for rotations, Gram factors and
// small test matrices. Not a general linear algebra layer.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // y = M x
    std::vector<double> apply(std::span<const double> x) const;
    // y = M^T x
    std::vector<double> apply_transpose(std::span<const double> x) const;

    std::vector<double> column(std::size_t j) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void scale_in_place(std::span<double> a, double s);
// a -= s * b
void axpy(std::span<double> a, double s, std::span<const double> b);

// max_ij |Q^T Q - I|; the orthogonality residual used by every Q validation.
double orthogonality_residual(const Matrix& q);

// Determinant by LU with partial pivoting (diagnostics only).
double determinant(Matrix m);

bool is_orthogonal(const Matrix& q, double tol = 1e-10);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j pairs with values[j]
};

// Cyclic Jacobi for small symmetric matrices (Gram matrices, test matrices).
SymmetricEigen jacobi_eigen(const Matrix& sym, int max_sweeps = 50);

// Factor L with L L^T = G for a PSD matrix G; eigenvalues below -tol reject,
// small negatives clamp to zero. Throws std::invalid_argument when not PSD.
Matrix psd_factor(const Matrix& gram, double tol = 1e-10);

} // namespace tracekit
