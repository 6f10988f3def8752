#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pcs/metrics.hpp"

using namespace pcs;

TEST_CASE("a cloud deviates from itself by zero") {
    std::mt19937 gen(61);
    const PointCloud cloud = oracles::random_cloud(gen, 200);
    const auto report = deviation(cloud, cloud);
    CHECK(report.n == 200);
    CHECK(report.mean_distance == 0.0);
    CHECK(report.std_deviation == 0.0);
    CHECK(report.max_distance == 0.0);
}

TEST_CASE("a translated dense grid deviates by the translation") {
    PointCloud reference;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 200; ++j)
            reference.points.push_back({0.005 * i, 0.005 * j, 0.0});
    PointCloud cloud;
    const double d = 0.3;
    for (int i = 20; i <= 180; i += 16)
        for (int j = 20; j <= 180; j += 16)
            cloud.points.push_back({0.005 * i, 0.005 * j, d});

    const auto report = deviation(cloud, reference);
    CHECK(report.mean_distance == doctest::Approx(d).epsilon(1e-6));
    CHECK(report.std_deviation == doctest::Approx(d).epsilon(1e-6));
    CHECK(report.max_distance == doctest::Approx(d).epsilon(1e-6));
}

TEST_CASE("deviation matches the exhaustive nearest-neighbor oracle") {
    std::mt19937 gen(62);
    for (int trial = 0; trial < 10; ++trial) {
        const PointCloud cloud = oracles::random_cloud(gen, 300);
        const PointCloud reference = oracles::random_cloud(gen, 500);
        const auto report = deviation(cloud, reference, /*keep_distances=*/true);

        double sum = 0.0, sum_sq = 0.0, max_d = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const double d = oracles::nearest_scan(reference, cloud[i]).distance;
            CHECK(report.distances[i] == d);
            sum += d;
            sum_sq += d * d;
            max_d = std::max(max_d, d);
        }
        const double n = static_cast<double>(cloud.size());
        CHECK(std::fabs(report.mean_distance - sum / n) <= 1e-12);
        CHECK(std::fabs(report.std_deviation - std::sqrt(sum_sq / n)) <= 1e-12);
        CHECK(report.max_distance == max_d);
    }
}

TEST_CASE("deviation requires non-empty inputs") {
    PointCloud one({{0, 0, 0}});
    CHECK_THROWS_AS(deviation(PointCloud{}, one), EmptyCloud);
    CHECK_THROWS_AS(deviation(one, PointCloud{}), EmptyCloud);
}

TEST_CASE("RMS dominates the mean on random reports") {
    std::mt19937 gen(63);
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud cloud = oracles::random_cloud(gen, 100);
        const PointCloud reference = oracles::random_cloud(gen, 100);
        const auto report = deviation(cloud, reference);
        CHECK(report.std_deviation >= report.mean_distance * (1.0 - 1e-12));
        CHECK(report.max_distance >= report.std_deviation * (1.0 - 1e-12));
    }
}

TEST_CASE("deviation is invariant under permuting either cloud") {
    std::mt19937 gen(64);
    PointCloud cloud = oracles::random_cloud(gen, 150);
    PointCloud reference = oracles::random_cloud(gen, 200);
    const auto base = deviation(cloud, reference);

    std::shuffle(cloud.points.begin(), cloud.points.end(), gen);
    std::shuffle(reference.points.begin(), reference.points.end(), gen);
    const auto shuffled = deviation(cloud, reference);
    CHECK(shuffled.mean_distance == doctest::Approx(base.mean_distance).epsilon(1e-12));
    CHECK(shuffled.std_deviation == doctest::Approx(base.std_deviation).epsilon(1e-12));
    CHECK(shuffled.max_distance == base.max_distance);
}

TEST_CASE("moving points toward the reference never raises an aggregate") {
    std::mt19937 gen(65);
    const PointCloud reference = oracles::random_cloud(gen, 120);
    const PointCloud cloud = oracles::random_cloud(gen, 80);
    const auto before = deviation(cloud, reference);

    PointCloud closer;
    for (const Point3& p : cloud) {
        const auto hit = oracles::nearest_scan(reference, p);
        closer.points.push_back(p + 0.5 * (reference[hit.index] - p));
    }
    const auto after = deviation(closer, reference);
    CHECK(after.mean_distance <= before.mean_distance);
    CHECK(after.std_deviation <= before.std_deviation);
    CHECK(after.max_distance <= before.max_distance);
}

TEST_CASE("point-to-triangle distance on fixed cases") {
    const Triangle tri{{0, 0, 0}, {4, 0, 0}, {0, 4, 0}};
    CHECK(point_triangle_distance({1, 1, 0}, tri) == 0.0);
    CHECK(point_triangle_distance({1, 1, 0.7}, tri) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(point_triangle_distance({-3, 0, 0}, tri) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(point_triangle_distance({2, -1, 0}, tri) == doctest::Approx(1.0).epsilon(1e-15));
    // Nearest point on the hypotenuse x + y = 4 is (2,2,0).
    CHECK(point_triangle_distance({5, 5, 0}, tri) ==
          doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("triangle distance matches the independent geometric oracle") {
    std::mt19937 gen(66);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Triangle tri{oracles::random_point(gen, 1.0), oracles::random_point(gen, 1.0),
                           oracles::random_point(gen, 1.0)};
        const Point3 p{dist(gen), dist(gen), dist(gen)};
        const double got = point_triangle_distance(p, tri);
        const double want = oracles::point_triangle_scan(p, tri);
        CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, want));
    }
}

TEST_CASE("deviation_to_mesh matches the exhaustive all-triangles oracle") {
    std::mt19937 gen(67);
    TriangleMesh mesh;
    for (int t = 0; t < 50; ++t)
        mesh.triangles.push_back({oracles::random_point(gen, 1.0),
                                  oracles::random_point(gen, 1.0),
                                  oracles::random_point(gen, 1.0)});
    const PointCloud cloud = oracles::random_cloud(gen, 200, 1.5);
    const auto report = deviation_to_mesh(cloud, mesh, /*keep_distances=*/true);

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Triangle& tri : mesh.triangles)
            best = std::min(best, oracles::point_triangle_scan(cloud[i], tri));
        CHECK(std::fabs(report.distances[i] - best) <= 1e-12 * std::max(1.0, best));
    }
}

TEST_CASE("deviation_to_mesh rejects an empty mesh") {
    PointCloud one({{0, 0, 0}});
    CHECK_THROWS_AS(deviation_to_mesh(one, TriangleMesh{}), EmptyMesh);
    CHECK_THROWS_AS(deviation_to_mesh(PointCloud{}, TriangleMesh{{{{0,0,0},{1,0,0},{0,1,0}}}}),
                    EmptyCloud);
}
