#include "pcs/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "pcs/io.hpp"
#include "pcs/parallel.hpp"
#include "pcs/rng.hpp"

namespace pcs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::int64_t lower_median(std::vector<std::int64_t> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

bool clouds_bit_identical(const PointCloud& a, const PointCloud& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i]))
            return false;
    return true;
}

} // namespace

PointCloud generate_surface(const SyntheticSurface& surface) {
    if (surface.n < 1)
        throw InvalidParam("generate_surface: n must be >= 1");

    PointCloud cloud;
    cloud.points.reserve(surface.n);
    std::mt19937_64 gen(surface.seed);

    switch (surface.kind) {
        case SurfaceKind::Plane:
            for (std::size_t i = 0; i < surface.n; ++i)
                cloud.points.push_back(Point3{rng::uniform01(gen), rng::uniform01(gen), 0.0});
            break;
        case SurfaceKind::Sphere:
            for (std::size_t i = 0; i < surface.n; ++i) {
                const double z = 1.0 - 2.0 * rng::uniform01(gen);
                const double phi = 2.0 * kPi * rng::uniform01(gen);
                const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
                cloud.points.push_back(Point3{rxy * std::cos(phi), rxy * std::sin(phi), z});
            }
            break;
        case SurfaceKind::Torus: {
            const double major = 1.0;
            const double minor = 0.35;
            while (cloud.size() < surface.n) {
                const double u = 2.0 * kPi * rng::uniform01(gen);   // tube angle
                const double v = 2.0 * kPi * rng::uniform01(gen);   // around the axis
                // Area element is proportional to major + minor*cos(u).
                const double accept = (major + minor * std::cos(u)) / (major + minor);
                if (rng::uniform01(gen) > accept)
                    continue;
                const double ring = major + minor * std::cos(u);
                cloud.points.push_back(
                    Point3{ring * std::cos(v), ring * std::sin(v), minor * std::sin(u)});
            }
            break;
        }
        case SurfaceKind::GaussianBump:
            for (std::size_t i = 0; i < surface.n; ++i) {
                const double x = 2.0 * rng::uniform01(gen) - 1.0;
                const double y = 2.0 * rng::uniform01(gen) - 1.0;
                const double z = 0.5 * std::exp(-(x * x + y * y) / 0.25);
                cloud.points.push_back(Point3{x, y, z});
            }
            break;
    }
    return cloud;
}

TimingReport run_benchmark(const PointCloud& cloud, const MlsParams& params,
                           const std::vector<std::size_t>& worker_counts, int repetitions) {
    params.validate();
    if (worker_counts.empty())
        throw InvalidParam("run_benchmark: worker_counts must not be empty");
    if (std::find(worker_counts.begin(), worker_counts.end(), std::size_t{1}) ==
        worker_counts.end())
        throw InvalidParam("run_benchmark: worker_counts must include 1");
    if (repetitions < 1)
        throw InvalidParam("run_benchmark: repetitions must be >= 1");

    TimingReport report;

    // Serial reference: correctness baseline for every timed configuration.
    const std::int64_t serial_start = now_ns();
    const auto [reference, ref_summary] = smooth_cloud(cloud, params);
    report.serial_reference_ns = now_ns() - serial_start;
    (void)ref_summary;

    for (std::size_t p : worker_counts) {
        TimingRow row;
        row.workers = p;
        row.reps = repetitions;
        for (int rep = 0; rep < repetitions; ++rep) {
            const std::int64_t start = now_ns();
            const auto [smoothed, summary] = parallel_smooth(cloud, params, p);
            row.rep_times_ns.push_back(now_ns() - start);
            (void)summary;
            if (!clouds_bit_identical(smoothed, reference))
                throw NumericalFailure("benchmark: output with " + std::to_string(p) +
                                       " workers differs from the serial reference; "
                                       "timings discarded");
        }
        row.t_ns_median = lower_median(row.rep_times_ns);
        report.rows.push_back(row);
    }

    std::int64_t t1 = 0;
    for (const TimingRow& row : report.rows)
        if (row.workers == 1) {
            t1 = row.t_ns_median;
            break;
        }
    for (TimingRow& row : report.rows) {
        row.speedup = static_cast<double>(t1) / static_cast<double>(row.t_ns_median);
        row.efficiency_pct = 100.0 * row.speedup / static_cast<double>(row.workers);
    }
    return report;
}

void write_timing_csv(const TimingReport& report, std::ostream& out) {
    out << "p,t_ns_median,speedup,efficiency_pct,reps\n";
    for (const TimingRow& row : report.rows)
        out << row.workers << ',' << row.t_ns_median << ',' << format_double(row.speedup) << ','
            << format_double(row.efficiency_pct) << ',' << row.reps << '\n';
}

std::string timing_csv(const TimingReport& report) {
    std::ostringstream oss;
    write_timing_csv(report, oss);
    return oss.str();
}

} // namespace pcs
