#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcs/core.hpp"
#include "pcs/kernels.hpp"

namespace pcs {

struct LopParams {
    KernelParams kernel;
    double mu = 0.4;              // repulsion balance, in [0, 0.5)
    int iterations = 30;
    double convergence_tol = 1e-7;   // on the max point displacement per sweep

    void validate() const {
        kernel.validate();
        if (!(mu >= 0.0) || !(mu < 0.5))
            throw InvalidParam("LopParams: mu must be in [0, 0.5)");
        if (iterations < 1)
            throw InvalidParam("LopParams: iterations must be >= 1");
        if (!(convergence_tol > 0.0))
            throw InvalidParam("LopParams: convergence_tol must be positive");
    }
};

struct LopSummary {
    int iterations_run = 0;
    bool converged = false;
    std::size_t isolated_events = 0;    // zero attraction weight; point held in place
    std::size_t coincident_pairs = 0;   // exactly coincident projected points seen
    std::vector<std::uint32_t> isolated_indices;   // unique, ascending
};

/// Projects `initial` onto the geometry of `data` by the fixed-point sweep
///
///   x_i <- sum_j p_j a_ij / sum_j a_ij + mu * sum_{i' != i} (x_i - x_i') b_ii' / sum b_ii'
///
/// with attraction weights a_ij = theta(d)/d (a Weiszfeld step toward the
/// locally weighted L1 median of the data) and repulsion weights
/// b_ii' = theta(d) |eta'(d)| / d. All weights are evaluated on the previous
/// sweep's points (Jacobi update), so results do not depend on update order.
///
/// A point exactly coincident with a data sample contributes no attraction
/// direction of its own; if no other in-support data exists the point is
/// pinned at that sample (the classical anchor rule). A point with zero total
/// attraction weight is isolated: reported and passed through unchanged for
/// that sweep.
std::pair<PointCloud, LopSummary> lop_project(const PointCloud& data,
                                              const PointCloud& initial,
                                              const LopParams& params);

} // namespace pcs
