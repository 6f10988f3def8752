#include "pcs/wls.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace pcs {

namespace {

// Deterministic sign convention for a normal with no preferred side:
// positive z component wins, then positive y, then positive x.
Point3 orient_by_axis_rule(Point3 n) {
    if (n.z != 0.0) return n.z > 0.0 ? n : -1.0 * n;
    if (n.y != 0.0) return n.y > 0.0 ? n : -1.0 * n;
    return n.x >= 0.0 ? n : -1.0 * n;
}

// In-plane axes from the final normal: Gram-Schmidt against the world axis
// least aligned with n (ties resolved x, then y, then z), then v = n x u so
// that {u, v, n} is right-handed.
void complete_frame(LocalFrame& frame) {
    const Point3 n = frame.normal;
    const double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
    Point3 e{1.0, 0.0, 0.0};
    double best = ax;
    if (ay < best) { e = Point3{0.0, 1.0, 0.0}; best = ay; }
    if (az < best) { e = Point3{0.0, 0.0, 1.0}; }
    Point3 u = e - dot(e, n) * n;
    u = u / norm(u);
    frame.u = u;
    frame.v = cross(n, u);
}

} // namespace

double evaluate_polynomial(const BivariatePolynomial& poly, double u, double v) {
    const int m = poly.degree;
    double upow[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
    double vpow[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 1; i <= m; ++i) {
        upow[i] = upow[i - 1] * u;
        vpow[i] = vpow[i - 1] * v;
    }
    double sum = 0.0;
    std::size_t k = 0;
    for (int s = 0; s <= m; ++s)
        for (int a = s; a >= 0; --a)
            sum += poly.coefficients[k++] * upow[a] * vpow[s - a];
    return sum;
}

PlaneFitResult fit_reference_plane(const SpatialIndex& index, Point3 r,
                                   const KernelParams& kernel, double tol,
                                   int max_iter, const QueryCoverage* guard) {
    kernel.validate();
    if (!(tol > 0.0))
        throw InvalidParam("fit_reference_plane: tol must be positive");
    if (max_iter < 1)
        throw InvalidParam("fit_reference_plane: max_iter must be >= 1");

    const double support = kernel.support();
    const PointCloud& cloud = index.cloud();
    thread_local std::vector<SpatialIndex::Hit> hits;

    PlaneFitResult result;
    Point3 q = r;
    Point3 n{0.0, 0.0, 0.0};
    double t = 0.0;
    bool converged = false;

    for (int iter = 1; iter <= max_iter; ++iter) {
        result.iterations = iter;
        if (guard && !guard->covers(q)) {
            result.status = PlaneFitStatus::OutOfCoverage;
            return result;
        }
        index.radius_query(q, support, hits);
        if (hits.size() < 3) {
            result.status = PlaneFitStatus::TooFewNeighbors;
            return result;
        }

        // Weighted centroid; hits arrive sorted by point index, which pins
        // the floating-point summation order.
        double wsum = 0.0;
        Point3 c{0.0, 0.0, 0.0};
        for (const auto& h : hits) {
            const double w = theta(h.distance, kernel);
            wsum += w;
            c += w * cloud[h.index];
        }
        if (!(wsum > 0.0)) {
            result.status = PlaneFitStatus::TooFewNeighbors;
            return result;
        }
        c = c / wsum;

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& h : hits) {
            const double w = theta(h.distance, kernel);
            const Point3 d = cloud[h.index] - c;
            cov(0, 0) += w * d.x * d.x;
            cov(0, 1) += w * d.x * d.y;
            cov(0, 2) += w * d.x * d.z;
            cov(1, 1) += w * d.y * d.y;
            cov(1, 2) += w * d.y * d.z;
            cov(2, 2) += w * d.z * d.z;
        }
        cov(1, 0) = cov(0, 1);
        cov(2, 0) = cov(0, 2);
        cov(2, 1) = cov(1, 2);

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
        eig.computeDirect(cov);
        const Eigen::Vector3d evals = eig.eigenvalues();  // ascending
        if (evals[1] - evals[0] <= 1e-12 * evals[2]) {
            result.status = PlaneFitStatus::DegenerateNeighborhood;
            return result;
        }
        const Eigen::Vector3d ev = eig.eigenvectors().col(0);
        n = Point3{ev[0], ev[1], ev[2]};
        n = n / norm(n);

        t = dot(n, c - r);
        const Point3 q_next = r + t * n;
        const double step = norm(q_next - q);
        q = q_next;
        if (step < tol) {
            converged = true;
            break;
        }
    }

    // <n, r - q> = -t, so the orientation rule flips n when t > 0.
    if (t > 0.0) {
        n = -1.0 * n;
    } else if (t == 0.0) {
        n = orient_by_axis_rule(n);
    }

    result.frame.origin = q;
    result.frame.normal = n;
    complete_frame(result.frame);
    result.status = converged ? PlaneFitStatus::Ok : PlaneFitStatus::NoConvergence;
    return result;
}

PolyFitResult fit_local_polynomial(const SpatialIndex& index, const LocalFrame& frame,
                                   const KernelParams& kernel, int degree,
                                   const QueryCoverage* guard) {
    kernel.validate();
    if (degree < 1 || degree > 4)
        throw InvalidParam("fit_local_polynomial: degree must be in [1,4]");

    PolyFitResult result;
    if (guard && !guard->covers(frame.origin)) {
        result.status = PolyFitStatus::OutOfCoverage;
        return result;
    }

    const double support = kernel.support();
    const PointCloud& cloud = index.cloud();
    thread_local std::vector<SpatialIndex::Hit> hits;
    index.radius_query(frame.origin, support, hits);

    const int K = BivariatePolynomial::coefficient_count(degree);
    if (hits.size() < static_cast<std::size_t>(K)) {
        result.status = PolyFitStatus::TooFewNeighbors;
        return result;
    }

    using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 15, 15>;
    using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 15, 1>;

    SmallMatrix M = SmallMatrix::Zero(K, K);
    SmallVector b = SmallVector::Zero(K);
    double basis[15];
    double upow[5], vpow[5];
    upow[0] = vpow[0] = 1.0;

    for (const auto& h : hits) {
        const Point3 d = cloud[h.index] - frame.origin;
        const double ui = dot(d, frame.u);
        const double vi = dot(d, frame.v);
        const double fi = dot(d, frame.normal);
        const double w = theta(h.distance, kernel);

        for (int i = 1; i <= degree; ++i) {
            upow[i] = upow[i - 1] * ui;
            vpow[i] = vpow[i - 1] * vi;
        }
        int k = 0;
        for (int s = 0; s <= degree; ++s)
            for (int a = s; a >= 0; --a)
                basis[k++] = upow[a] * vpow[s - a];

        for (int row = 0; row < K; ++row) {
            const double wb = w * basis[row];
            for (int col = 0; col < K; ++col)
                M(row, col) += wb * basis[col];
            b[row] += wb * fi;
        }
    }

    Eigen::SelfAdjointEigenSolver<SmallMatrix> eig(M);
    const SmallVector evals = eig.eigenvalues();
    const double lmax = evals[K - 1];
    if (!(lmax > 0.0) || evals[0] <= 1e-12 * lmax) {
        result.status = PolyFitStatus::SingularSystem;
        return result;
    }

    SmallVector coeffs = eig.eigenvectors() * (eig.eigenvectors().transpose() * b).cwiseQuotient(evals);
    // One refinement pass keeps the normal-equation residual gradient small.
    const SmallVector residual = b - M * coeffs;
    coeffs += eig.eigenvectors() * (eig.eigenvectors().transpose() * residual).cwiseQuotient(evals);

    result.poly.degree = degree;
    result.poly.coefficients.assign(coeffs.data(), coeffs.data() + K);
    return result;
}

} // namespace pcs
