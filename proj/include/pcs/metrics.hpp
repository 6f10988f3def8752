#pragma once

#include <vector>

#include "pcs/core.hpp"

namespace pcs {

/// Per-cloud deviation aggregates. `std_deviation` is the RMS of the
/// point-to-reference distances, so std_deviation >= mean_distance always.
struct DeviationReport {
    std::size_t n = 0;
    double mean_distance = 0.0;
    double std_deviation = 0.0;
    double max_distance = 0.0;
    std::vector<double> distances;   // retained only when requested
};

/// Distance from every cloud point to its nearest reference point,
/// aggregated into mean, RMS and max.
DeviationReport deviation(const PointCloud& cloud, const PointCloud& reference,
                          bool keep_distances = false);

struct Triangle {
    Point3 a;
    Point3 b;
    Point3 c;
};

/// Unindexed triangle soup used as an exact reference surface.
struct TriangleMesh {
    std::vector<Triangle> triangles;

    std::size_t size() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }
};

/// Exact Euclidean distance from a point to a triangle (interior, edge or
/// vertex region, whichever is closest).
double point_triangle_distance(Point3 p, const Triangle& tri);

/// Distance from every cloud point to the nearest mesh triangle, aggregated
/// as in `deviation`.
DeviationReport deviation_to_mesh(const PointCloud& cloud, const TriangleMesh& mesh,
                                  bool keep_distances = false);

} // namespace pcs
