#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/mls.hpp"

namespace pcs {

enum class SurfaceKind { Plane, Sphere, Torus, GaussianBump };

struct SyntheticSurface {
    SurfaceKind kind = SurfaceKind::Sphere;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Seeded sampling of an analytic surface; every generated point lies exactly
/// on it. Plane: z = 0 over [0,1]^2. Sphere: unit sphere, area-uniform.
/// Torus: major radius 1, minor 0.35, area-uniform by rejection.
/// GaussianBump: z = 0.5 exp(-(x^2+y^2)/0.25) over [-1,1]^2.
PointCloud generate_surface(const SyntheticSurface& surface);

struct TimingRow {
    std::size_t workers = 0;
    std::int64_t t_ns_median = 0;
    double speedup = 0.0;
    double efficiency_pct = 0.0;
    int reps = 0;
    std::vector<std::int64_t> rep_times_ns;
};

struct TimingReport {
    std::vector<TimingRow> rows;
    std::int64_t serial_reference_ns = 0;   // one timed smooth_cloud run
};

/// Times parallel_smooth (partition + exchange + compute + gather only) for
/// every requested worker count, `repetitions` times each, on a monotonic
/// nanosecond clock. Before any timing is accepted, each run's output is
/// checked bit-identical against the serial reference; a mismatch aborts the
/// benchmark. speedup = t1/tp and efficiency = 100*speedup/p are computed
/// from the median (lower median for even rep counts) rep times.
TimingReport run_benchmark(const PointCloud& cloud, const MlsParams& params,
                           const std::vector<std::size_t>& worker_counts, int repetitions);

/// CSV rows in worker-count request order under the pinned header
/// `p,t_ns_median,speedup,efficiency_pct,reps`.
void write_timing_csv(const TimingReport& report, std::ostream& out);
std::string timing_csv(const TimingReport& report);

} // namespace pcs
