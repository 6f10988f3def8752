#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "pcs/core.hpp"
#include "pcs/kernels.hpp"
#include "pcs/spatial.hpp"
#include "pcs/wls.hpp"

namespace pcs {

struct MlsParams {
    KernelParams kernel;
    int degree = 2;              // polynomial degree, in [1,4]
    double plane_tol = 1e-10;
    int plane_max_iter = 50;

    void validate() const {
        kernel.validate();
        if (degree < 1 || degree > 4)
            throw InvalidParam("MlsParams: degree must be in [1,4]");
        if (!(plane_tol > 0.0))
            throw InvalidParam("MlsParams: plane_tol must be positive");
        if (plane_max_iter < 1)
            throw InvalidParam("MlsParams: plane_max_iter must be >= 1");
    }
};

enum class ProjectionStatus {
    Full,             // projected onto the requested-degree polynomial
    DegradedDegree,   // polynomial degree stepped down before succeeding
    PlaneOnly,        // every polynomial degree failed; projected onto the plane
    Skipped,          // no usable neighborhood; input passed through unchanged
};

struct ProjectionOutcome {
    Point3 projected;
    ProjectionStatus status = ProjectionStatus::Skipped;
    int degree_used = 0;        // 0 unless status is Full or DegradedDegree
    int iterations_used = 0;    // plane-fit iterations
    PlaneFitStatus plane_status = PlaneFitStatus::Ok;
};

struct SmoothingSummary {
    std::size_t full = 0;
    std::size_t degraded_degree = 0;
    std::size_t plane_only = 0;
    std::size_t skipped = 0;
    std::size_t plane_no_convergence = 0;     // plane frames taken from the last iterate
    std::size_t degenerate_neighborhoods = 0; // counted within `skipped`
    std::size_t coverage_fallbacks = 0;       // worker points recomputed on the full cloud

    std::size_t total() const { return full + degraded_degree + plane_only + skipped; }
    void add(const ProjectionOutcome& outcome);
    void merge(const SmoothingSummary& other);
};

/// Projects `r` onto the local polynomial surface: fit the reference plane,
/// fit the height polynomial over it, return origin + g(0,0) * normal.
/// Never hard-fails: a thin or degenerate neighborhood degrades the result
/// (lower degree, plane only, or pass-through) and is reflected in `status`.
ProjectionOutcome project_point(const SpatialIndex& index, Point3 r, const MlsParams& params);

/// Guarded variant for domain-decomposition workers. Returns nullopt when the
/// computation required data beyond `guard`'s coverage; the caller must redo
/// that point against a complete neighbor source.
std::optional<ProjectionOutcome> project_point_guarded(const SpatialIndex& index, Point3 r,
                                                       const MlsParams& params,
                                                       const QueryCoverage* guard);

/// Sequential reference smoother: projects every point of `cloud` using the
/// untouched input cloud as the neighbor source. Output order = input order.
std::pair<PointCloud, SmoothingSummary> smooth_cloud(const PointCloud& cloud,
                                                     const MlsParams& params);

} // namespace pcs
