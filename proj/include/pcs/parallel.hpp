#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/mls.hpp"

namespace pcs {

/// 1-D slab decomposition along the longest bounding-box axis. Cuts are
/// equal-count: slabs hold ceil(N/W) or floor(N/W) points each, split on the
/// sorted axis coordinate with ties resolved by original index. A boundary
/// coordinate belongs to the right slab.
struct PartitionLayout {
    int axis = 0;                 // 0=x, 1=y, 2=z
    std::size_t workers = 1;
    double border_width = 0.0;    // kernel support radius, exactly
    std::vector<double> cuts;     // W-1 ascending cut coordinates

    /// Nominal slab interval of worker u: [lo(u), hi(u)), open-ended at the
    /// domain boundary.
    double lo(std::size_t u) const {
        return u == 0 ? -std::numeric_limits<double>::infinity() : cuts[u - 1];
    }
    double hi(std::size_t u) const {
        return u + 1 == workers ? std::numeric_limits<double>::infinity() : cuts[u];
    }
};

/// A worker's share of the cloud: points plus their original indices, both
/// ascending by original index.
struct WorkerCloud {
    std::vector<Point3> points;
    std::vector<std::uint32_t> original;

    std::size_t size() const { return points.size(); }
};

/// Splits the cloud into `workers` slabs. The union of the returned clouds is
/// exactly the input (as a multiset), and per-worker counts differ by at most
/// one.
std::pair<PartitionLayout, std::vector<WorkerCloud>>
partition(const PointCloud& cloud, std::size_t workers, double support);

/// Border exchange: worker u receives every non-own point whose axis
/// coordinate lies within border_width of its slab interval. For slabs wider
/// than the support this is exactly the classic left/right exchange with the
/// two adjacent workers; thinner slabs also receive from farther workers so
/// that halo sufficiency holds for any worker count. Messages travel through
/// a single-writer mailbox (one slot per ordered worker pair) and are
/// consumed only after the send phase completes.
std::vector<WorkerCloud> exchange_borders(const PartitionLayout& layout,
                                          const std::vector<WorkerCloud>& parts);

/// Domain-decomposition smoother: partition, exchange borders, run the MLS
/// projection per worker over (own + halo) points, gather by original index.
/// Output is bit-identical to smooth_cloud for every worker count.
std::pair<PointCloud, SmoothingSummary> parallel_smooth(const PointCloud& cloud,
                                                        const MlsParams& params,
                                                        std::size_t workers);

} // namespace pcs
