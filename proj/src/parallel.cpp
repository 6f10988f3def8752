#include "pcs/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <string>

namespace pcs {

namespace {

double axis_coord(Point3 p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

// Worker tasks always all execute; the thread count is only how many run at
// once. Capped so absurd worker requests cannot exhaust the machine.
int thread_count(std::size_t workers) {
    return static_cast<int>(std::min<std::size_t>(workers, 256));
}

// Guard for one worker: a support-radius query at `center` is complete iff
// `center`'s axis coordinate lies inside the nominal slab interval, because
// the halo band extends exactly one support radius beyond it on either side.
class SlabCoverage final : public QueryCoverage {
public:
    SlabCoverage(int axis, double lo, double hi) : axis_(axis), lo_(lo), hi_(hi) {}

    bool covers(Point3 center) const override {
        const double c = axis_coord(center, axis_);
        return c >= lo_ && c <= hi_;
    }

private:
    int axis_;
    double lo_;
    double hi_;
};

// Collects the first failure raised inside a parallel region; OpenMP regions
// must not leak exceptions.
class FailureLatch {
public:
    void capture(const std::exception& e) {
#pragma omp critical(pcs_failure_latch)
        {
            if (!failed_) {
                failed_ = true;
                message_ = e.what();
            }
        }
    }

    void rethrow() const {
        if (failed_)
            throw WorkerFailure("worker failed: " + message_);
    }

    bool failed() const { return failed_; }

private:
    bool failed_ = false;
    std::string message_;
};

} // namespace

std::pair<PartitionLayout, std::vector<WorkerCloud>>
partition(const PointCloud& cloud, std::size_t workers, double support) {
    if (workers < 1)
        throw InvalidParam("partition: workers must be >= 1");
    if (!(support > 0.0))
        throw InvalidParam("partition: support must be positive");
    if (cloud.empty())
        throw EmptyCloud("partition: cloud is empty");

    const Aabb box = bounding_box(cloud);
    const Point3 ext = box.extent();
    int axis = 0;
    if (ext.y > axis_coord(ext, axis)) axis = 1;
    if (ext.z > axis_coord(ext, axis)) axis = 2;

    const std::size_t n = cloud.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ca = axis_coord(cloud[a], axis);
        const double cb = axis_coord(cloud[b], axis);
        if (ca != cb) return ca < cb;
        return a < b;
    });

    PartitionLayout layout;
    layout.axis = axis;
    layout.workers = workers;
    layout.border_width = support;

    std::vector<WorkerCloud> parts(workers);
    const std::size_t base = n / workers;
    const std::size_t rem = n % workers;
    std::size_t begin = 0;
    for (std::size_t u = 0; u < workers; ++u) {
        const std::size_t count = base + (u < rem ? 1 : 0);
        const std::size_t end = begin + count;

        WorkerCloud& part = parts[u];
        part.original.assign(order.begin() + begin, order.begin() + end);
        std::sort(part.original.begin(), part.original.end());
        part.points.reserve(count);
        for (std::uint32_t idx : part.original)
            part.points.push_back(cloud[idx]);

        if (u + 1 < workers) {
            // Cut midway between the slabs' facing coordinates; for a tie the
            // midpoint is the shared coordinate and the boundary point
            // belongs to the right slab by the count rule. With W > N the
            // trailing slabs are empty and their cuts collapse to the bbox
            // edge.
            if (end < n) {
                const double left = axis_coord(cloud[order[end - 1]], axis);
                const double right = axis_coord(cloud[order[end]], axis);
                layout.cuts.push_back(0.5 * (left + right));
            } else {
                layout.cuts.push_back(axis_coord(box.max, axis));
            }
        }
        begin = end;
    }
    return {layout, parts};
}

std::vector<WorkerCloud> exchange_borders(const PartitionLayout& layout,
                                          const std::vector<WorkerCloud>& parts) {
    const std::size_t w = layout.workers;
    if (parts.size() != w)
        throw InvalidParam("exchange_borders: parts/layout worker count mismatch");

    // mailbox[v][u]: points sent by worker v for worker u's halo. Each slot
    // has exactly one writer (v) and one reader (u); the implicit barrier at
    // the end of the send loop is the delivery point.
    std::vector<std::vector<WorkerCloud>> mailbox(w, std::vector<WorkerCloud>(w));

    const int axis = layout.axis;
    const double border = layout.border_width;
    FailureLatch latch;

    omp_set_dynamic(0);
#pragma omp parallel for schedule(static, 1) num_threads(thread_count(w))
    for (std::size_t v = 0; v < w; ++v) {
        try {
            const WorkerCloud& own = parts[v];
            for (std::size_t u = 0; u < w; ++u) {
                if (u == v)
                    continue;
                const double band_lo = layout.lo(u) - border;
                const double band_hi = layout.hi(u) + border;
                WorkerCloud& msg = mailbox[v][u];
                for (std::size_t i = 0; i < own.points.size(); ++i) {
                    const double c = axis_coord(own.points[i], axis);
                    if (c >= band_lo && c <= band_hi) {
                        msg.points.push_back(own.points[i]);
                        msg.original.push_back(own.original[i]);
                    }
                }
            }
        } catch (const std::exception& e) {
            latch.capture(e);
        }
    }
    latch.rethrow();

#pragma omp parallel for schedule(static, 1) num_threads(thread_count(w))
    for (std::size_t u = 0; u < w; ++u) {
        try {
            WorkerCloud& halo = mailbox[u][u];  // reuse the diagonal slot as the result
            std::vector<std::pair<std::uint32_t, Point3>> merged;
            for (std::size_t v = 0; v < w; ++v) {
                if (v == u)
                    continue;
                const WorkerCloud& msg = mailbox[v][u];
                for (std::size_t i = 0; i < msg.points.size(); ++i)
                    merged.emplace_back(msg.original[i], msg.points[i]);
            }
            std::sort(merged.begin(), merged.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            halo.points.clear();
            halo.original.clear();
            halo.points.reserve(merged.size());
            halo.original.reserve(merged.size());
            for (const auto& [idx, p] : merged) {
                halo.original.push_back(idx);
                halo.points.push_back(p);
            }
        } catch (const std::exception& e) {
            latch.capture(e);
        }
    }
    latch.rethrow();

    std::vector<WorkerCloud> halos(w);
    for (std::size_t u = 0; u < w; ++u)
        halos[u] = std::move(mailbox[u][u]);
    return halos;
}

std::pair<PointCloud, SmoothingSummary> parallel_smooth(const PointCloud& cloud,
                                                        const MlsParams& params,
                                                        std::size_t workers) {
    params.validate();
    if (workers < 1)
        throw InvalidParam("parallel_smooth: workers must be >= 1");

    PointCloud out;
    SmoothingSummary summary;
    if (cloud.empty())
        return {out, summary};

    auto [layout, parts] = partition(cloud, workers, params.kernel.support());
    std::vector<WorkerCloud> halos = exchange_borders(layout, parts);

    out.points.resize(cloud.size());
    std::vector<SmoothingSummary> worker_summaries(workers);
    std::vector<std::vector<std::uint32_t>> escaped(workers);
    FailureLatch latch;

    omp_set_dynamic(0);
#pragma omp parallel for schedule(static, 1) num_threads(thread_count(workers))
    for (std::size_t u = 0; u < workers; ++u) {
        try {
            const WorkerCloud& own = parts[u];
            const WorkerCloud& halo = halos[u];
            if (own.points.empty())
                continue;

            // Merge own + halo ascending by original index, so that local
            // radius queries enumerate neighbors in exactly the full-cloud
            // order.
            PointCloud local;
            local.points.reserve(own.size() + halo.size());
            std::size_t a = 0, b = 0;
            while (a < own.size() || b < halo.size()) {
                const bool take_own =
                    b == halo.size() || (a < own.size() && own.original[a] < halo.original[b]);
                if (take_own) {
                    local.points.push_back(own.points[a]);
                    ++a;
                } else {
                    local.points.push_back(halo.points[b]);
                    ++b;
                }
            }

            const SpatialIndex local_index(local);
            const SlabCoverage guard(layout.axis, layout.lo(u), layout.hi(u));

            for (std::size_t i = 0; i < own.size(); ++i) {
                const auto outcome =
                    project_point_guarded(local_index, own.points[i], params, &guard);
                if (!outcome) {
                    escaped[u].push_back(own.original[i]);
                    continue;
                }
                out.points[own.original[i]] = outcome->projected;
                worker_summaries[u].add(*outcome);
            }
        } catch (const std::exception& e) {
            latch.capture(e);
        }
    }
    latch.rethrow();

    for (const SmoothingSummary& s : worker_summaries)
        summary.merge(s);

    // Points whose plane iteration wandered outside the guarded slab are
    // resolved against the full cloud; this is the same code path the
    // sequential smoother runs, so gathered output stays bit-identical.
    std::size_t total_escaped = 0;
    for (const auto& e : escaped)
        total_escaped += e.size();
    if (total_escaped > 0) {
        std::vector<std::uint32_t> all;
        all.reserve(total_escaped);
        for (const auto& e : escaped)
            all.insert(all.end(), e.begin(), e.end());
        std::sort(all.begin(), all.end());

        const SpatialIndex full_index(cloud);
        for (std::uint32_t idx : all) {
            const ProjectionOutcome outcome = project_point(full_index, cloud[idx], params);
            out.points[idx] = outcome.projected;
            summary.add(outcome);
        }
        summary.coverage_fallbacks = total_escaped;
    }

    return {out, summary};
}

} // namespace pcs
