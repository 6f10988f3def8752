#include "pcs/noise.hpp"

#include <cmath>

#include "pcs/rng.hpp"

namespace pcs {

PointCloud add_noise(const PointCloud& cloud, const NoiseParams& params) {
    if (!(params.sigma >= 0.0) || !std::isfinite(params.sigma))
        throw InvalidParam("add_noise: sigma must be finite and >= 0");

    PointCloud out;
    out.points.reserve(cloud.size());
    std::mt19937_64 gen(params.seed);
    rng::Normal normal;
    const double s = params.sigma;
    for (const Point3& p : cloud) {
        const double dx = s * normal(gen);
        const double dy = s * normal(gen);
        const double dz = s * normal(gen);
        out.points.push_back(Point3{p.x + dx, p.y + dy, p.z + dz});
    }
    return out;
}

} // namespace pcs
