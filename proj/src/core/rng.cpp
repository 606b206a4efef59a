#include "core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tracekit {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
    // Feed both words through the splitmix chain so that nearby (seed, stream)
    // pairs land on unrelated xoshiro states.
    std::uint64_t x = seed;
    std::uint64_t s0 = splitmix64(x);
    x ^= 0x6a09e667f3bcc909ULL + stream_id;
    std::uint64_t s1 = splitmix64(x);
    x += stream_id;
    state_[0] = splitmix64(x);
    state_[1] = splitmix64(x) ^ s0;
    state_[2] = splitmix64(x);
    state_[3] = splitmix64(x) ^ s1;
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        state_[0] = 1; // xoshiro must not start at the all-zero state
}

// xoshiro256++
std::uint64_t RandomSource::next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomSource::next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_gaussian() noexcept {
    if (has_gauss_spare_) {
        has_gauss_spare_ = false;
        return gauss_spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    gauss_spare_ = v * f;
    has_gauss_spare_ = true;
    return u * f;
}

double RandomSource::next_gamma(double shape) {
    if (!(shape > 0.0))
        throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a)
        const double g = next_gamma(shape + 1.0);
        const double u = next_double();
        return g * std::pow(u > 0.0 ? u : 0x1.0p-53, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

} // namespace tracekit
