#pragma once

// Reproducible random complex entries.  The generator is SplitMix64 with
// the published constants; the split operation derives an independent
// child stream from (state, stream index) deterministically, so per-trial
// streams do not depend on draw order.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "xqr/complex.hpp"
#include "xqr/errors.hpp"

namespace xqr {

class split_mix64 {
    std::uint64_t state_;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

public:
    explicit split_mix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }

    // Child generator for stream `k`; a pure function of the current state.
    split_mix64 split(std::uint64_t k) const {
        return split_mix64(mix(state_ ^ ((k + 1) * 0x9E3779B97F4A7C15ull)));
    }
};

enum class modulus_dist { log_uniform, linear_uniform };

// Unit-modulus sample exp(i*theta), theta uniform on [0, 2*pi).
template <class R>
cplx<R> random_unit_complex(split_mix64& rng) {
    double theta = 2.0 * std::numbers::pi * rng.next_unit();
    return {R(std::cos(theta)), R(std::sin(theta))};
}

// Modulus spread over [10^-g, 10^g]: by default the exponent is drawn
// uniformly (log-uniform modulus); the linear option draws the modulus
// itself uniformly.  g == 0 delegates to the unit generator so the theta
// stream is unchanged.  Samples are computed in double and widened.
template <class R>
cplx<R> random_ranged_complex(split_mix64& rng, double g,
                              modulus_dist dist = modulus_dist::log_uniform) {
    if (g < 0.0) throw usage_error("modulus range exponent must be nonnegative");
    if (g == 0.0) return random_unit_complex<R>(rng);
    double r;
    if (dist == modulus_dist::log_uniform) {
        r = std::pow(10.0, g * (2.0 * rng.next_unit() - 1.0));
    } else {
        double lo = std::pow(10.0, -g);
        double hi = std::pow(10.0, g);
        r = lo + (hi - lo) * rng.next_unit();
    }
    double theta = 2.0 * std::numbers::pi * rng.next_unit();
    return {R(r * std::cos(theta)), R(r * std::sin(theta))};
}

}  // namespace xqr
