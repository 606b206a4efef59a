#pragma once

#include <cstdint>
#include <string>

#include "core/estimator.hpp"
#include "core/implicit_matrix.hpp"

namespace tracekit {

// Builds a matrix from a spec string. Accepted forms:
//   - builtin generators: identity:n, diag-spike:n, diag-flat:n, offdiag:n,
//     planted-p1:n:eps, planted-p2:n:eps, rotated:<inner>:seed
//   - inline JSON (first character '{')
//   - @path to a JSON file
// Planted generators draw their hidden directions from `seed`; the rotated
// generator uses the seed embedded in its own spec string.
ImplicitMatrix matrix_from_spec(const std::string& spec, std::uint64_t seed);

// JSON document form; round-trips losslessly through matrix_from_json.
std::string matrix_to_json(const ImplicitMatrix& m);
ImplicitMatrix matrix_from_json(const std::string& json_text, std::uint64_t seed = 0);

// Estimator spec strings: rademacher | gaussian | unit | orthogonal |
// configured:<file>. The file holds {"k": int, "mixture": [{"probability":
// p, "angles": scalar-or-list, "weights": [w/n...]}, ...]}.
LinearEstimator estimator_from_spec(const std::string& spec, std::size_t k);

LinearEstimator configured_from_json(const std::string& json_text);

} // namespace tracekit
