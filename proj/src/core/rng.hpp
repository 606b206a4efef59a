#pragma once

#include <cstdint>

namespace tracekit {

// Deterministic random stream. A (seed, stream_id) pair fully determines the
// byte sequence; distinct stream_ids give statistically independent streams,
// which is the contract parallel trial runners rely on.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() noexcept;

    // Standard normal via the Marsaglia polar method (second value cached).
    double next_gaussian() noexcept;

    // Gamma(shape, scale 1), Marsaglia-Tsang squeeze; valid for any shape > 0.
    double next_gamma(double shape);

    // Chi-square with df degrees of freedom (df > 0, not necessarily integer).
    double next_chi_square(double df) { return 2.0 * next_gamma(0.5 * df); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_[4];
    double gauss_spare_ = 0.0;
    bool has_gauss_spare_ = false;
};

} // namespace tracekit
