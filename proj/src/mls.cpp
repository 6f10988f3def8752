#include "pcs/mls.hpp"

namespace pcs {

void SmoothingSummary::add(const ProjectionOutcome& outcome) {
    switch (outcome.status) {
        case ProjectionStatus::Full: ++full; break;
        case ProjectionStatus::DegradedDegree: ++degraded_degree; break;
        case ProjectionStatus::PlaneOnly: ++plane_only; break;
        case ProjectionStatus::Skipped: ++skipped; break;
    }
    if (outcome.plane_status == PlaneFitStatus::NoConvergence)
        ++plane_no_convergence;
    if (outcome.plane_status == PlaneFitStatus::DegenerateNeighborhood)
        ++degenerate_neighborhoods;
}

void SmoothingSummary::merge(const SmoothingSummary& other) {
    full += other.full;
    degraded_degree += other.degraded_degree;
    plane_only += other.plane_only;
    skipped += other.skipped;
    plane_no_convergence += other.plane_no_convergence;
    degenerate_neighborhoods += other.degenerate_neighborhoods;
    coverage_fallbacks += other.coverage_fallbacks;
}

std::optional<ProjectionOutcome> project_point_guarded(const SpatialIndex& index, Point3 r,
                                                       const MlsParams& params,
                                                       const QueryCoverage* guard) {
    params.validate();

    ProjectionOutcome outcome;
    outcome.projected = r;

    PlaneFitResult plane = fit_reference_plane(index, r, params.kernel, params.plane_tol,
                                               params.plane_max_iter, guard);
    outcome.iterations_used = plane.iterations;
    outcome.plane_status = plane.status;

    if (plane.status == PlaneFitStatus::OutOfCoverage)
        return std::nullopt;
    if (plane.status == PlaneFitStatus::TooFewNeighbors ||
        plane.status == PlaneFitStatus::DegenerateNeighborhood) {
        outcome.status = ProjectionStatus::Skipped;
        return outcome;
    }
    // NoConvergence keeps the last iterate's frame and proceeds.

    for (int degree = params.degree; degree >= 1; --degree) {
        PolyFitResult poly = fit_local_polynomial(index, plane.frame, params.kernel, degree, guard);
        if (poly.status == PolyFitStatus::OutOfCoverage)
            return std::nullopt;
        if (poly.status == PolyFitStatus::Ok) {
            // r sits at in-plane coordinates (0,0) by construction of the
            // frame origin, so the projection is origin + g(0,0) * normal.
            const double height = evaluate_polynomial(poly.poly, 0.0, 0.0);
            outcome.projected = plane.frame.origin + height * plane.frame.normal;
            outcome.status = degree == params.degree ? ProjectionStatus::Full
                                                     : ProjectionStatus::DegradedDegree;
            outcome.degree_used = degree;
            return outcome;
        }
    }

    outcome.projected = plane.frame.origin;
    outcome.status = ProjectionStatus::PlaneOnly;
    return outcome;
}

ProjectionOutcome project_point(const SpatialIndex& index, Point3 r, const MlsParams& params) {
    return *project_point_guarded(index, r, params, nullptr);
}

std::pair<PointCloud, SmoothingSummary> smooth_cloud(const PointCloud& cloud,
                                                     const MlsParams& params) {
    params.validate();
    PointCloud out;
    SmoothingSummary summary;
    if (cloud.empty())
        return {out, summary};

    const SpatialIndex index(cloud);
    out.points.resize(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const ProjectionOutcome outcome = project_point(index, cloud[i], params);
        out.points[i] = outcome.projected;
        summary.add(outcome);
    }
    return {out, summary};
}

} // namespace pcs
