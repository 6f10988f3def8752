#include "pcs/core.hpp"

#include <algorithm>

namespace pcs {

bool PointCloud::all_finite() const {
    return std::all_of(points.begin(), points.end(), [](Point3 p) { return is_finite(p); });
}

Aabb bounding_box(const PointCloud& cloud) {
    if (cloud.empty())
        throw EmptyCloud("bounding_box: cloud is empty");
    Aabb box{cloud[0], cloud[0]};
    for (const Point3& p : cloud) {
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.min.z = std::min(box.min.z, p.z);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
        box.max.z = std::max(box.max.z, p.z);
    }
    return box;
}

} // namespace pcs
