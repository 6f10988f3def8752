#pragma once

#include <cstdint>
#include <vector>

#include "pcs/core.hpp"

namespace pcs {

/// Exact nearest-neighbor and radius queries over an immutable cloud.
///
/// A bounding-box kd-tree. Inclusion tests compare squared distances
/// (d2 <= r*r), so results agree bit-for-bit with a linear scan using the
/// same predicate. Radius hits are returned sorted by original point index,
/// which fixes the summation order of every weighted sum downstream; that
/// ordering (not the tree layout) is what the determinism contract relies on.
///
/// The index references the cloud it was built over; the cloud must outlive it.
class SpatialIndex {
public:
    struct Hit {
        std::size_t index;   ///< original position in the indexed cloud
        double distance;     ///< Euclidean distance to the query point
    };

    explicit SpatialIndex(const PointCloud& cloud, int leaf_size = 16);

    /// All points with ||p - center|| <= r, sorted by original index.
    std::vector<Hit> radius_query(Point3 center, double r) const;

    /// Buffer-reusing variant for hot loops. `out` is cleared first.
    void radius_query(Point3 center, double r, std::vector<Hit>& out) const;

    /// Globally nearest point; ties broken toward the smallest index.
    Hit nearest(Point3 query) const;

    std::size_t size() const { return perm_.size(); }
    const PointCloud& cloud() const { return *cloud_; }

private:
    struct Node {
        Aabb box;
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;   // -1 marks a leaf
        std::int32_t right = -1;
    };

    const PointCloud* cloud_;
    int leaf_size_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    double box_min_dist2(const Aabb& box, Point3 c) const;
};

} // namespace pcs
