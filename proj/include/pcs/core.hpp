#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pcs/errors.hpp"

namespace pcs {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Point3 operator*(double s, Point3 p) { return {s * p.x, s * p.y, s * p.z}; }
    friend Point3 operator*(Point3 p, double s) { return s * p; }
    friend Point3 operator/(Point3 p, double s) { return {p.x / s, p.y / s, p.z / s}; }
    Point3& operator+=(Point3 o) { x += o.x; y += o.y; z += o.z; return *this; }
    Point3& operator-=(Point3 o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    /// Exact bitwise-value equality; used by the determinism tests.
    friend bool operator==(Point3 a, Point3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(Point3 a) { return dot(a, a); }
inline double norm(Point3 a) { return std::sqrt(norm2(a)); }

inline bool is_finite(Point3 p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// An ordered point container. Iteration order is storage order; a point's
/// position in `points` is its stable original index.
struct PointCloud {
    std::vector<Point3> points;

    PointCloud() = default;
    explicit PointCloud(std::vector<Point3> pts) : points(std::move(pts)) {}

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const Point3& operator[](std::size_t i) const { return points[i]; }
    Point3& operator[](std::size_t i) { return points[i]; }

    auto begin() const { return points.begin(); }
    auto end() const { return points.end(); }

    /// True when every coordinate of every point is finite.
    bool all_finite() const;
};

struct Aabb {
    Point3 min;
    Point3 max;

    Point3 extent() const { return max - min; }
};

/// Componentwise min/max over all points. Throws EmptyCloud for N = 0.
Aabb bounding_box(const PointCloud& cloud);

} // namespace pcs
