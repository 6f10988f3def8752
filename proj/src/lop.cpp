#include "pcs/lop.hpp"

#include <algorithm>
#include <cmath>

#include "pcs/spatial.hpp"

namespace pcs {

std::pair<PointCloud, LopSummary> lop_project(const PointCloud& data,
                                              const PointCloud& initial,
                                              const LopParams& params) {
    params.validate();
    if (data.empty())
        throw EmptyCloud("lop_project: data cloud is empty");

    LopSummary summary;
    PointCloud current = initial;
    if (initial.empty())
        return {current, summary};

    const double support = params.kernel.support();
    const double mu = params.mu;
    const SpatialIndex data_index(data);

    const std::size_t m = current.size();
    PointCloud next;
    next.points.resize(m);
    std::vector<std::uint8_t> isolated(m, 0);
    std::vector<std::uint32_t> coincident(m, 0);

    for (int sweep = 1; sweep <= params.iterations; ++sweep) {
        summary.iterations_run = sweep;
        std::fill(isolated.begin(), isolated.end(), 0);
        std::fill(coincident.begin(), coincident.end(), 0);

        // Repulsion reads the previous sweep's points, so the index over the
        // moving set is rebuilt once per sweep.
        const SpatialIndex self_index(current);

#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i) {
            const Point3 x = current[i];
            thread_local std::vector<SpatialIndex::Hit> hits;

            // Attraction: Weiszfeld step toward the weighted L1 median of the
            // in-support data. Zero-distance terms carry no direction and are
            // dropped; they matter only when nothing else is in support.
            data_index.radius_query(x, support, hits);
            double attr_wsum = 0.0;
            Point3 attr_num{0.0, 0.0, 0.0};
            bool anchored = false;
            Point3 anchor{0.0, 0.0, 0.0};
            for (const auto& h : hits) {
                if (h.distance == 0.0) {
                    if (!anchored) {
                        anchored = true;
                        anchor = data[h.index];
                    }
                    continue;
                }
                const double w = theta(h.distance, params.kernel) / h.distance;
                attr_wsum += w;
                attr_num += w * data[h.index];
            }

            if (!(attr_wsum > 0.0)) {
                if (anchored) {
                    next.points[i] = anchor;   // pinned at the coincident sample
                } else {
                    isolated[i] = 1;
                    next.points[i] = x;
                }
                continue;
            }

            Point3 updated = attr_num / attr_wsum;

            if (mu > 0.0) {
                self_index.radius_query(x, support, hits);
                double rep_wsum = 0.0;
                Point3 rep_num{0.0, 0.0, 0.0};
                for (const auto& h : hits) {
                    if (h.index == i)
                        continue;
                    if (h.distance == 0.0) {
                        ++coincident[i];   // coincident pair: no direction to push
                        continue;
                    }
                    const double w = theta(h.distance, params.kernel) *
                                     eta_derivative_magnitude(h.distance) / h.distance;
                    rep_wsum += w;
                    rep_num += w * (x - current[h.index]);
                }
                if (rep_wsum > 0.0)
                    updated += mu * (rep_num / rep_wsum);
            }

            next.points[i] = updated;
        }

        // Deterministic aggregation in index order.
        double max_disp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            max_disp = std::max(max_disp, norm(next.points[i] - current[i]));
            if (isolated[i]) {
                ++summary.isolated_events;
                if (summary.isolated_indices.empty() ||
                    summary.isolated_indices.back() != static_cast<std::uint32_t>(i))
                    summary.isolated_indices.push_back(static_cast<std::uint32_t>(i));
            }
            summary.coincident_pairs += coincident[i];
        }
        current.points.swap(next.points);

        if (max_disp < params.convergence_tol) {
            summary.converged = true;
            break;
        }
    }

    std::sort(summary.isolated_indices.begin(), summary.isolated_indices.end());
    summary.isolated_indices.erase(
        std::unique(summary.isolated_indices.begin(), summary.isolated_indices.end()),
        summary.isolated_indices.end());
    return {current, summary};
}

} // namespace pcs
