#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "core/linalg.hpp"

namespace tracekit {

// One rank-one factor of a planted matrix: coefficient * direction direction^T.
struct PlantedTerm {
    double coefficient;
    std::vector<double> direction; // unit norm; pairwise orthogonal across terms
};

// A symmetric matrix exposed only through structured representations, so the
// quadratic form x^T A x and the ground-truth functionals (trace, Frobenius
// norm, diagonal) are exact without ever forming dense storage.
//
// Values are immutable after construction and safe to share across threads.
class ImplicitMatrix {
public:
    enum class Kind { Diagonal, Planted, Dense, Rotated };

    static ImplicitMatrix diagonal(std::vector<double> values);
    static ImplicitMatrix dense(Matrix entries);
    static ImplicitMatrix planted(std::size_t n, std::vector<PlantedTerm> terms);
    // Represents Q^T A Q for the given orthogonal Q.
    static ImplicitMatrix rotated(ImplicitMatrix inner, Matrix rotation,
                                  std::optional<std::uint64_t> rotation_seed = std::nullopt);

    Kind kind() const;
    std::size_t dim() const { return n_; }

    // x^T A x; O(n) for diagonal, O(n * terms) for planted, O(n^2) for dense.
    double quadratic_form(std::span<const double> x) const;

    double trace() const;
    double frobenius_norm() const;
    double diagonal_sum_of_squares() const;

    // The diagonal entries; for rotated wrappers this costs one quadratic
    // form per entry and is meant for setup-time use only.
    std::vector<double> diagonal() const;

    // Dense n x n form, guarded against accidental quadratic blowup.
    Matrix materialize(std::size_t limit = kDenseLimit) const;

    ImplicitMatrix similarity_transform(Matrix q) const;

    static constexpr std::size_t kDenseLimit = 4096;
    static constexpr double kOrthoTol = 1e-10;

    // Representation access for serialization.
    const std::vector<double>* as_diagonal() const;
    const std::vector<PlantedTerm>* as_planted() const;
    const Matrix* as_dense() const;
    struct RotatedView {
        const ImplicitMatrix* inner;
        const Matrix* rotation;
        std::optional<std::uint64_t> rotation_seed;
    };
    std::optional<RotatedView> as_rotated() const;

private:
    struct DiagonalNode {
        std::vector<double> values;
    };
    struct PlantedNode {
        std::vector<PlantedTerm> terms;
    };
    struct DenseNode {
        Matrix entries;
    };
    struct RotatedNode {
        std::shared_ptr<const ImplicitMatrix> inner;
        Matrix rotation;
        std::optional<std::uint64_t> rotation_seed;
    };

    ImplicitMatrix() = default;

    std::size_t n_ = 0;
    std::variant<DiagonalNode, PlantedNode, DenseNode, RotatedNode> node_;
};

} // namespace tracekit
