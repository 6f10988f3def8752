#pragma once

#include <cstdint>

#include "pcs/core.hpp"

namespace pcs {

struct NoiseParams {
    double sigma = 0.0;        // per-coordinate standard deviation
    std::uint64_t seed = 0;
};

/// Adds an independent N(0, sigma^2) increment to every coordinate of every
/// point. Fully deterministic: mt19937_64 seeded with `seed`, Box-Muller
/// normals, draws consumed point by point in storage order (x, then y, then
/// z). Same (cloud, sigma, seed) gives the identical cloud everywhere.
PointCloud add_noise(const PointCloud& cloud, const NoiseParams& params);

} // namespace pcs
