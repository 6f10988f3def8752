#include "pcs/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pcs/spatial.hpp"

namespace pcs {

namespace {

DeviationReport aggregate(std::vector<double>&& distances, bool keep_distances) {
    DeviationReport report;
    report.n = distances.size();
    double sum = 0.0;
    double sum_sq = 0.0;
    double max_d = 0.0;
    for (double d : distances) {
        sum += d;
        sum_sq += d * d;
        max_d = std::max(max_d, d);
    }
    const double n = static_cast<double>(report.n);
    report.mean_distance = sum / n;
    report.std_deviation = std::sqrt(sum_sq / n);
    report.max_distance = max_d;

    // Power-mean inequality; the slack absorbs summation rounding.
    if (report.std_deviation < report.mean_distance * (1.0 - 1e-12))
        throw Error("internal: RMS deviation fell below mean distance");

    if (keep_distances)
        report.distances = std::move(distances);
    return report;
}

} // namespace

DeviationReport deviation(const PointCloud& cloud, const PointCloud& reference,
                          bool keep_distances) {
    if (cloud.empty())
        throw EmptyCloud("deviation: cloud is empty");
    if (reference.empty())
        throw EmptyCloud("deviation: reference cloud is empty");

    const SpatialIndex index(reference);
    std::vector<double> distances(cloud.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < cloud.size(); ++i)
        distances[i] = index.nearest(cloud[i]).distance;

    return aggregate(std::move(distances), keep_distances);
}

double point_triangle_distance(Point3 p, const Triangle& tri) {
    // Ericson, "Real-Time Collision Detection": Voronoi-region walk.
    const Point3 ab = tri.b - tri.a;
    const Point3 ac = tri.c - tri.a;
    const Point3 ap = p - tri.a;

    const double d1 = dot(ab, ap);
    const double d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0)
        return norm(p - tri.a);

    const Point3 bp = p - tri.b;
    const double d3 = dot(ab, bp);
    const double d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3)
        return norm(p - tri.b);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return norm(p - (tri.a + v * ab));
    }

    const Point3 cp = p - tri.c;
    const double d5 = dot(ab, cp);
    const double d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6)
        return norm(p - tri.c);

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return norm(p - (tri.a + w * ac));
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return norm(p - (tri.b + w * (tri.c - tri.b)));
    }

    if (!(va + vb + vc > 0.0)) {
        // Degenerate (zero-area) triangle: nearest point lies on an edge.
        auto segment_dist = [&](Point3 s0, Point3 s1) {
            const Point3 d = s1 - s0;
            const double len2 = norm2(d);
            if (len2 == 0.0)
                return norm(p - s0);
            const double t = std::clamp(dot(p - s0, d) / len2, 0.0, 1.0);
            return norm(p - (s0 + t * d));
        };
        return std::min({segment_dist(tri.a, tri.b), segment_dist(tri.b, tri.c),
                         segment_dist(tri.a, tri.c)});
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    return norm(p - (tri.a + v * ab + w * ac));
}

DeviationReport deviation_to_mesh(const PointCloud& cloud, const TriangleMesh& mesh,
                                  bool keep_distances) {
    if (cloud.empty())
        throw EmptyCloud("deviation_to_mesh: cloud is empty");
    if (mesh.empty())
        throw EmptyMesh("deviation_to_mesh: mesh has no triangles");

    std::vector<double> distances(cloud.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double best = point_triangle_distance(cloud[i], mesh.triangles[0]);
        for (std::size_t t = 1; t < mesh.size(); ++t)
            best = std::min(best, point_triangle_distance(cloud[i], mesh.triangles[t]));
        distances[i] = best;
    }

    return aggregate(std::move(distances), keep_distances);
}

} // namespace pcs
