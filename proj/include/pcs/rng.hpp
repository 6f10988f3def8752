#pragma once

#include <cstdint>
#include <random>

namespace pcs {

/// Deterministic random primitives shared by the noise model and the surface
/// generators. The generator is std::mt19937_64 (algorithm pinned by the
/// standard) and the uniform/normal transforms below are spelled out here so
/// the draw sequence is identical on every platform. std::*_distribution is
/// deliberately avoided: its algorithm is implementation-defined.
namespace rng {

/// Uniform double in [0, 1), from the top 53 bits of one 64-bit draw.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a logarithm argument.
inline double uniform01_open_low(std::mt19937_64& gen) {
    return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal draws via the Box-Muller transform, one pair per two
/// uniforms, second value cached. Draw order is part of the contract.
class Normal {
public:
    double operator()(std::mt19937_64& gen) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low(gen);
        const double u2 = uniform01(gen);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rng
} // namespace pcs
