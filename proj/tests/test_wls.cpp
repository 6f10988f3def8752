#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pcs/spatial.hpp"
#include "pcs/wls.hpp"

using namespace pcs;

namespace {

PointCloud plane_cloud(std::mt19937& gen, int n, double sigma_z, double extent = 1.0) {
    std::uniform_real_distribution<double> xy(-extent, extent);
    std::normal_distribution<double> nz(0.0, sigma_z);
    PointCloud cloud;
    for (int i = 0; i < n; ++i)
        cloud.points.push_back({xy(gen), xy(gen), sigma_z > 0.0 ? nz(gen) : 0.0});
    return cloud;
}

struct Rotation {
    std::array<Point3, 3> rows;

    Point3 apply(Point3 p) const {
        return {dot(rows[0], p), dot(rows[1], p), dot(rows[2], p)};
    }

    static Rotation about(Point3 axis, double angle) {
        const Point3 a = axis / norm(axis);
        const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
        return {{Point3{t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y},
                 Point3{t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x},
                 Point3{t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c}}};
    }
};

double angle_to_z_axis(Point3 n) {
    return std::acos(std::min(1.0, std::fabs(n.z) / norm(n)));
}

} // namespace

TEST_CASE("exact plane: frame converges to the plane with the outward normal") {
    std::mt19937 gen(42);
    const PointCloud cloud = plane_cloud(gen, 50, 0.0);
    const SpatialIndex index(cloud);
    const KernelParams kernel{1.0};

    const auto above = fit_reference_plane(index, {0, 0, 0.5}, kernel);
    REQUIRE(above.status == PlaneFitStatus::Ok);
    CHECK(std::fabs(above.frame.normal.x) < 1e-9);
    CHECK(std::fabs(above.frame.normal.y) < 1e-9);
    CHECK(above.frame.normal.z == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(above.frame.origin.x) < 1e-9);
    CHECK(std::fabs(above.frame.origin.y) < 1e-9);
    CHECK(std::fabs(above.frame.origin.z) < 1e-9);

    const auto below = fit_reference_plane(index, {0, 0, -0.5}, kernel);
    REQUIRE(below.status == PlaneFitStatus::Ok);
    CHECK(below.frame.normal.z == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::fabs(below.frame.origin.z) < 1e-9);
}

TEST_CASE("orientation tie on the plane resolves toward positive z") {
    std::mt19937 gen(43);
    const PointCloud cloud = plane_cloud(gen, 50, 0.0);
    const SpatialIndex index(cloud);
    const auto fit = fit_reference_plane(index, {0.1, -0.2, 0.0}, KernelParams{1.0});
    REQUIRE(fit.status == PlaneFitStatus::Ok);
    CHECK(fit.frame.normal.z > 0.0);
}

TEST_CASE("frame is orthonormal and right-handed") {
    std::mt19937 gen(44);
    const PointCloud cloud = plane_cloud(gen, 200, 0.02);
    const SpatialIndex index(cloud);
    for (int trial = 0; trial < 20; ++trial) {
        const Point3 r = oracles::random_point(gen, 0.5);
        const auto fit = fit_reference_plane(index, r, KernelParams{0.8});
        if (fit.status != PlaneFitStatus::Ok)
            continue;
        const LocalFrame& f = fit.frame;
        CHECK(std::fabs(norm(f.normal) - 1.0) < 1e-12);
        CHECK(std::fabs(norm(f.u) - 1.0) < 1e-12);
        CHECK(std::fabs(norm(f.v) - 1.0) < 1e-12);
        CHECK(std::fabs(dot(f.u, f.v)) < 1e-12);
        CHECK(std::fabs(dot(f.u, f.normal)) < 1e-12);
        CHECK(std::fabs(dot(f.v, f.normal)) < 1e-12);
        CHECK(norm(cross(f.u, f.v) - f.normal) < 1e-12);
    }
}

TEST_CASE("noisy plane: normal agrees with a dense grid search over the objective") {
    std::mt19937 gen(45);
    const PointCloud cloud = plane_cloud(gen, 200, 0.01);
    const SpatialIndex index(cloud);
    const KernelParams kernel{1.0};
    const Point3 r{0.02, -0.03, 0.05};

    const auto fit = fit_reference_plane(index, r, kernel);
    REQUIRE(fit.status == PlaneFitStatus::Ok);
    CHECK(angle_to_z_axis(fit.frame.normal) < 0.02);

    // Dense (theta, phi, t) grid around the z axis.
    double best_obj = std::numeric_limits<double>::infinity();
    Point3 best_n{0, 0, 1};
    for (int ti = 0; ti <= 10; ++ti) {
        const double tilt = 0.005 * ti;
        for (int pi_ = 0; pi_ < 32; ++pi_) {
            const double phi = 2.0 * 3.14159265358979323846 * pi_ / 32.0;
            const Point3 n{std::sin(tilt) * std::cos(phi), std::sin(tilt) * std::sin(phi),
                           std::cos(tilt)};
            for (int k = -50; k <= 50; ++k) {
                const double t = 0.002 * k;
                const double obj = oracles::plane_objective(cloud, r, n, t, kernel);
                if (obj < best_obj) {
                    best_obj = obj;
                    best_n = n;
                }
            }
            if (ti == 0)
                break;   // tilt 0 does not depend on phi
        }
    }

    const double t_fit = dot(fit.frame.normal, fit.frame.origin - r);
    const double obj_fit = oracles::plane_objective(cloud, r, fit.frame.normal, t_fit, kernel);
    CHECK(obj_fit <= best_obj * (1.0 + 1e-9));
    const double cos_angle = std::fabs(dot(fit.frame.normal, best_n));
    CHECK(std::acos(std::min(1.0, cos_angle)) < 0.02);
}

TEST_CASE("converged fit is a local minimum of the objective") {
    std::mt19937 gen(46);
    const PointCloud cloud = plane_cloud(gen, 150, 0.01);
    const SpatialIndex index(cloud);
    const KernelParams kernel{0.8};
    const Point3 r{-0.1, 0.2, 0.03};

    const auto fit = fit_reference_plane(index, r, kernel);
    REQUIRE(fit.status == PlaneFitStatus::Ok);
    const Point3 n = fit.frame.normal;
    const double t = dot(n, fit.frame.origin - r);
    const double obj = oracles::plane_objective(cloud, r, n, t, kernel);

    const double delta = 1e-4;
    CHECK(oracles::plane_objective(cloud, r, n, t + delta, kernel) >= obj - 1e-10);
    CHECK(oracles::plane_objective(cloud, r, n, t - delta, kernel) >= obj - 1e-10);
    for (const Point3& dir : {fit.frame.u, -1.0 * fit.frame.u, fit.frame.v, -1.0 * fit.frame.v}) {
        Point3 tilted = n + delta * dir;
        tilted = tilted / norm(tilted);
        CHECK(oracles::plane_objective(cloud, r, tilted, t, kernel) >= obj - 1e-10);
    }
}

TEST_CASE("rigid motions transform the fitted frame covariantly") {
    std::mt19937 gen(47);
    const PointCloud cloud = plane_cloud(gen, 300, 0.02);
    const Point3 r{0.1, 0.05, 0.04};
    const KernelParams kernel{0.9};

    const SpatialIndex index(cloud);
    const auto fit = fit_reference_plane(index, r, kernel);
    REQUIRE(fit.status == PlaneFitStatus::Ok);

    const Rotation rot = Rotation::about({1.0, 2.0, 3.0}, 0.7);
    const Point3 shift{0.4, -0.2, 0.9};
    PointCloud moved;
    for (const Point3& p : cloud)
        moved.points.push_back(rot.apply(p) + shift);
    const SpatialIndex moved_index(moved);
    const auto moved_fit = fit_reference_plane(moved_index, rot.apply(r) + shift, kernel);
    REQUIRE(moved_fit.status == PlaneFitStatus::Ok);

    CHECK(norm(moved_fit.frame.origin - (rot.apply(fit.frame.origin) + shift)) < 1e-9);
    CHECK(norm(moved_fit.frame.normal - rot.apply(fit.frame.normal)) < 1e-9);
}

TEST_CASE("thin and degenerate neighborhoods are reported") {
    PointCloud two({{0, 0, 0}, {0.1, 0, 0}});
    const SpatialIndex two_index(two);
    CHECK(fit_reference_plane(two_index, {0, 0, 0.1}, KernelParams{1.0}).status ==
          PlaneFitStatus::TooFewNeighbors);

    PointCloud line;
    for (int i = 0; i < 10; ++i)
        line.points.push_back({0.1 * i, 0.0, 0.0});
    const SpatialIndex line_index(line);
    CHECK(fit_reference_plane(line_index, {0.45, 0.05, 0.0}, KernelParams{1.0}).status ==
          PlaneFitStatus::DegenerateNeighborhood);
}

TEST_CASE("max_iter = 1 emulates a single weighted-PCA pass") {
    std::mt19937 gen(48);
    const PointCloud cloud = plane_cloud(gen, 100, 0.05);
    const SpatialIndex index(cloud);
    const auto fit = fit_reference_plane(index, {0, 0, 0.2}, KernelParams{0.7}, 1e-10, 1);
    CHECK(fit.status == PlaneFitStatus::NoConvergence);
    CHECK(fit.iterations == 1);
    CHECK(std::fabs(norm(fit.frame.normal) - 1.0) < 1e-12);  // frame still usable
}

TEST_CASE("polynomial over an exact plane has all-zero coefficients") {
    std::mt19937 gen(49);
    const PointCloud cloud = plane_cloud(gen, 60, 0.0, 0.5);
    const SpatialIndex index(cloud);
    LocalFrame frame;
    frame.origin = {0, 0, 0};
    frame.normal = {0, 0, 1};
    frame.u = {1, 0, 0};
    frame.v = {0, 1, 0};
    for (int degree = 1; degree <= 4; ++degree) {
        const auto fit = fit_local_polynomial(index, frame, KernelParams{1.0}, degree);
        REQUIRE(fit.status == PolyFitStatus::Ok);
        for (double c : fit.poly.coefficients)
            CHECK(std::fabs(c) < 1e-10);
    }
}

TEST_CASE("degree-2 fit recovers an exact paraboloid") {
    std::mt19937 gen(50);
    std::uniform_real_distribution<double> xy(-0.5, 0.5);
    PointCloud cloud;
    for (int i = 0; i < 80; ++i) {
        const double x = xy(gen), y = xy(gen);
        cloud.points.push_back({x, y, x * x + y * y});
    }
    const SpatialIndex index(cloud);
    LocalFrame frame;
    frame.origin = {0, 0, 0};
    frame.normal = {0, 0, 1};
    frame.u = {1, 0, 0};
    frame.v = {0, 1, 0};

    const auto fit = fit_local_polynomial(index, frame, KernelParams{1.0}, 2);
    REQUIRE(fit.status == PolyFitStatus::Ok);
    // Order: 1, u, v, u^2, uv, v^2.
    CHECK(std::fabs(fit.poly.coefficients[0]) < 1e-8);
    CHECK(std::fabs(fit.poly.coefficients[1]) < 1e-8);
    CHECK(std::fabs(fit.poly.coefficients[2]) < 1e-8);
    CHECK(fit.poly.coefficients[3] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(fit.poly.coefficients[4]) < 1e-8);
    CHECK(fit.poly.coefficients[5] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("polynomial fit matches the dense normal-equation oracle") {
    std::mt19937 gen(51);
    for (int trial = 0; trial < 30; ++trial) {
        const PointCloud cloud = oracles::random_cloud(gen, 40, 0.8);
        const SpatialIndex index(cloud);
        const Rotation rot = Rotation::about(oracles::random_point(gen) + Point3{0.1, 0.2, 1.0},
                                             0.3 + trial * 0.1);
        LocalFrame frame;
        frame.origin = oracles::random_point(gen, 0.05);
        frame.u = rot.apply({1, 0, 0});
        frame.v = rot.apply({0, 1, 0});
        frame.normal = rot.apply({0, 0, 1});

        const KernelParams kernel{1.0};
        for (int degree = 1; degree <= 3; ++degree) {
            const auto fit = fit_local_polynomial(index, frame, kernel, degree);
            REQUIRE(fit.status == PolyFitStatus::Ok);

            std::vector<std::array<double, 2>> uv;
            std::vector<double> heights, weights;
            for (const Point3& p : cloud) {
                const Point3 d = p - frame.origin;
                uv.push_back({dot(d, frame.u), dot(d, frame.v)});
                heights.push_back(dot(d, frame.normal));
                weights.push_back(theta(norm(d), kernel));
            }
            const auto expected = oracles::wls_normal_solve(uv, heights, weights, degree);
            REQUIRE(fit.poly.coefficients.size() == expected.size());
            for (std::size_t k = 0; k < expected.size(); ++k)
                CHECK(fit.poly.coefficients[k] ==
                      doctest::Approx(expected[k]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("returned coefficients zero the weighted normal-equation gradient") {
    std::mt19937 gen(52);
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud cloud = oracles::random_cloud(gen, 50, 0.7);
        const SpatialIndex index(cloud);
        LocalFrame frame;
        frame.origin = {0, 0, 0};
        frame.u = {1, 0, 0};
        frame.v = {0, 1, 0};
        frame.normal = {0, 0, 1};
        const KernelParams kernel{1.0};
        const auto fit = fit_local_polynomial(index, frame, kernel, 2);
        REQUIRE(fit.status == PolyFitStatus::Ok);

        // grad = 2 (M c - b), assembled independently in long double.
        const int K = 6;
        std::vector<std::array<double, 2>> uv;
        std::vector<double> heights, weights;
        for (const Point3& p : cloud) {
            uv.push_back({p.x, p.y});
            heights.push_back(p.z);
            weights.push_back(theta(norm(p), kernel));
        }
        std::vector<long double> grad(K, 0.0L);
        double scale = 0.0;
        for (std::size_t n = 0; n < uv.size(); ++n) {
            const long double phi[K] = {1.0L, uv[n][0], uv[n][1], uv[n][0] * uv[n][0],
                                        uv[n][0] * uv[n][1], uv[n][1] * uv[n][1]};
            long double fitted = 0.0L;
            for (int k = 0; k < K; ++k)
                fitted += phi[k] * fit.poly.coefficients[static_cast<std::size_t>(k)];
            const long double resid = fitted - heights[n];
            for (int k = 0; k < K; ++k)
                grad[static_cast<std::size_t>(k)] += 2.0L * weights[n] * resid * phi[k];
            scale += std::fabs(weights[n] * heights[n]);
        }
        double gnorm = 0.0;
        for (int k = 0; k < K; ++k)
            gnorm += static_cast<double>(grad[static_cast<std::size_t>(k)] *
                                         grad[static_cast<std::size_t>(k)]);
        gnorm = std::sqrt(gnorm);
        CHECK(gnorm <= 1e-8 * std::max(1.0, scale));
    }
}

TEST_CASE("polynomial fit failure modes") {
    // Too few neighbors for the requested degree.
    PointCloud five;
    std::mt19937 gen(53);
    for (int i = 0; i < 5; ++i)
        five.points.push_back({0.1 * i, 0.05 * ((i * 7) % 5), 0.0});
    const SpatialIndex five_index(five);
    LocalFrame frame;
    frame.origin = {0.2, 0.1, 0};
    frame.u = {1, 0, 0};
    frame.v = {0, 1, 0};
    frame.normal = {0, 0, 1};
    CHECK(fit_local_polynomial(five_index, frame, KernelParams{1.0}, 2).status ==
          PolyFitStatus::TooFewNeighbors);
    CHECK(fit_local_polynomial(five_index, frame, KernelParams{1.0}, 1).status ==
          PolyFitStatus::Ok);

    // All samples share one (u,v): the normal matrix is singular.
    PointCloud stack;
    for (int i = 0; i < 10; ++i)
        stack.points.push_back({0.0, 0.0, 0.01 * i});
    const SpatialIndex stack_index(stack);
    CHECK(fit_local_polynomial(stack_index, frame, KernelParams{1.0}, 1).status ==
          PolyFitStatus::SingularSystem);
}

TEST_CASE("evaluate_polynomial on fixed cases") {
    BivariatePolynomial zero;
    zero.degree = 2;
    zero.coefficients.assign(6, 0.0);
    CHECK(evaluate_polynomial(zero, 0.7, -0.3) == 0.0);

    BivariatePolynomial para;
    para.degree = 2;
    para.coefficients = {0, 0, 0, 1, 0, 1};   // u^2 + v^2
    CHECK(evaluate_polynomial(para, 1.0, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("evaluate_polynomial matches the naive per-term oracle") {
    std::mt19937 gen(54);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> arg(-1.5, 1.5);
    BivariatePolynomial poly;
    poly.degree = 3;
    for (int k = 0; k < BivariatePolynomial::coefficient_count(3); ++k)
        poly.coefficients.push_back(coeff(gen));
    for (int i = 0; i < 100; ++i) {
        const double u = arg(gen), v = arg(gen);
        const double got = evaluate_polynomial(poly, u, v);
        const double want = oracles::poly_eval_naive(poly, u, v);
        CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
    }
}
