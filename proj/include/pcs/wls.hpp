#pragma once

#include <vector>

#include "pcs/core.hpp"
#include "pcs/kernels.hpp"
#include "pcs/spatial.hpp"

namespace pcs {

/// Orthonormal right-handed coordinate system {u, v, normal} on the fitted
/// reference plane, with `origin` the converged projection of the query point.
struct LocalFrame {
    Point3 origin;
    Point3 normal;
    Point3 u;
    Point3 v;

    /// World position of plane-local coordinates (a, b, height).
    Point3 to_world(double a, double b, double height) const {
        return origin + a * u + b * v + height * normal;
    }
};

/// Polynomial in the two in-plane coordinates. Coefficients follow the
/// monomial order u^a v^b sorted by total degree, then by a descending:
/// 1, u, v, u^2, uv, v^2, u^3, ...
struct BivariatePolynomial {
    int degree = 0;
    std::vector<double> coefficients;

    static int coefficient_count(int degree) { return (degree + 1) * (degree + 2) / 2; }
};

double evaluate_polynomial(const BivariatePolynomial& poly, double u, double v);

/// Coverage predicate used by the domain-decomposition workers: reports
/// whether a support-radius neighborhood query centered at `center` is fully
/// answerable from the local (own + halo) point set. A null guard means the
/// index covers the whole cloud and every query is complete.
class QueryCoverage {
public:
    virtual ~QueryCoverage() = default;
    virtual bool covers(Point3 center) const = 0;
};

enum class PlaneFitStatus {
    Ok,
    TooFewNeighbors,          // fewer than 3 in-support neighbors at some iterate
    DegenerateNeighborhood,   // two smallest covariance eigenvalues coincide
    NoConvergence,            // max_iter exhausted; frame holds the last iterate
    OutOfCoverage,            // a query left the guard's region (worker pool only)
};

struct PlaneFitResult {
    PlaneFitStatus status = PlaneFitStatus::Ok;
    LocalFrame frame;
    int iterations = 0;
};

/// Fits the weighted reference plane through the neighborhood of `r`.
///
/// Fixed-point iteration: starting from q = r, repeatedly (1) weight the
/// in-support neighbors by theta(||p_i - q||), (2) take the weighted centroid
/// c and weighted covariance about c, (3) set the normal n to the smallest-
/// eigenvalue eigenvector, (4) move q to r + <n, c - r> n. Stops when q moves
/// by less than `tol`. The returned normal satisfies <n, r - q> >= 0, with an
/// exact tie resolved toward positive z, then y, then x.
PlaneFitResult fit_reference_plane(const SpatialIndex& index, Point3 r,
                                   const KernelParams& kernel, double tol = 1e-10,
                                   int max_iter = 50,
                                   const QueryCoverage* guard = nullptr);

enum class PolyFitStatus {
    Ok,
    TooFewNeighbors,   // fewer neighbors than coefficients
    SingularSystem,    // normal-equation matrix condition failure
    OutOfCoverage,
};

struct PolyFitResult {
    PolyFitStatus status = PolyFitStatus::Ok;
    BivariatePolynomial poly;
};

/// Weighted least-squares fit of the neighborhood heights over the frame,
/// solved through the weighted normal equations. Weights are functions of the
/// 3-D distance to the frame origin.
PolyFitResult fit_local_polynomial(const SpatialIndex& index, const LocalFrame& frame,
                                   const KernelParams& kernel, int degree,
                                   const QueryCoverage* guard = nullptr);

} // namespace pcs
