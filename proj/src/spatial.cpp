#include "pcs/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcs {

namespace {

double axis_coord(Point3 p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

Aabb box_of(const PointCloud& cloud, const std::vector<std::uint32_t>& perm,
            std::uint32_t begin, std::uint32_t end) {
    Aabb box{cloud[perm[begin]], cloud[perm[begin]]};
    for (std::uint32_t i = begin + 1; i < end; ++i) {
        const Point3& p = cloud[perm[i]];
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.min.z = std::min(box.min.z, p.z);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
        box.max.z = std::max(box.max.z, p.z);
    }
    return box;
}

} // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud, int leaf_size)
    : cloud_(&cloud), leaf_size_(leaf_size) {
    if (leaf_size_ < 1)
        throw InvalidParam("SpatialIndex leaf_size must be >= 1");
    perm_.resize(cloud.size());
    for (std::uint32_t i = 0; i < perm_.size(); ++i)
        perm_[i] = i;
    if (!perm_.empty()) {
        nodes_.reserve(2 * perm_.size() / static_cast<std::size_t>(leaf_size_) + 2);
        build(0, static_cast<std::uint32_t>(perm_.size()));
    }
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{});
    Node node;
    node.box = box_of(*cloud_, perm_, begin, end);
    node.begin = begin;
    node.end = end;

    if (end - begin > static_cast<std::uint32_t>(leaf_size_)) {
        const Point3 ext = node.box.extent();
        int axis = 0;
        if (ext.y > axis_coord(ext, axis)) axis = 1;
        if (ext.z > axis_coord(ext, axis)) axis = 2;

        const std::uint32_t mid = begin + (end - begin) / 2;
        const PointCloud& cloud = *cloud_;
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             const double ca = axis_coord(cloud[a], axis);
                             const double cb = axis_coord(cloud[b], axis);
                             if (ca != cb) return ca < cb;
                             return a < b;  // ties by index: deterministic layout
                         });
        node.left = build(begin, mid);
        node.right = build(mid, end);
    }
    nodes_[static_cast<std::size_t>(id)] = node;
    return id;
}

double SpatialIndex::box_min_dist2(const Aabb& box, Point3 c) const {
    const double dx = std::max({0.0, box.min.x - c.x, c.x - box.max.x});
    const double dy = std::max({0.0, box.min.y - c.y, c.y - box.max.y});
    const double dz = std::max({0.0, box.min.z - c.z, c.z - box.max.z});
    return dx * dx + dy * dy + dz * dz;
}

void SpatialIndex::radius_query(Point3 center, double r, std::vector<Hit>& out) const {
    if (!(r > 0.0) || !std::isfinite(r))
        throw InvalidParam("radius_query requires finite r > 0");
    out.clear();
    if (perm_.empty())
        return;

    const double r2 = r * r;
    std::int32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
        if (box_min_dist2(node.box, center) > r2)
            continue;
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t idx = perm_[i];
                const double d2 = norm2((*cloud_)[idx] - center);
                if (d2 <= r2)
                    out.push_back(Hit{idx, std::sqrt(d2)});
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Hit& a, const Hit& b) { return a.index < b.index; });
}

std::vector<SpatialIndex::Hit> SpatialIndex::radius_query(Point3 center, double r) const {
    std::vector<Hit> out;
    radius_query(center, r, out);
    return out;
}

SpatialIndex::Hit SpatialIndex::nearest(Point3 query) const {
    if (perm_.empty())
        throw EmptyCloud("nearest: index built over an empty cloud");

    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    bool found = false;

    // Recursive best-first descent; nodes at exactly the best distance are
    // still visited so the smallest-index tie-break is exact.
    auto visit = [&](auto&& self, std::int32_t node_id) -> void {
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        if (found && box_min_dist2(node.box, query) > best_d2)
            return;
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t idx = perm_[i];
                const double d2 = norm2((*cloud_)[idx] - query);
                if (!found || d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
                    best_d2 = d2;
                    best_idx = idx;
                    found = true;
                }
            }
            return;
        }
        const double dl = box_min_dist2(nodes_[static_cast<std::size_t>(node.left)].box, query);
        const double dr = box_min_dist2(nodes_[static_cast<std::size_t>(node.right)].box, query);
        if (dl <= dr) {
            self(self, node.left);
            self(self, node.right);
        } else {
            self(self, node.right);
            self(self, node.left);
        }
    };
    visit(visit, 0);

    return Hit{best_idx, std::sqrt(best_d2)};
}

} // namespace pcs
