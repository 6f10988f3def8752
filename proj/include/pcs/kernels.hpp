#pragma once

#include "pcs/errors.hpp"

namespace pcs {

/// Weight-function parameters shared by the plane fit, the polynomial fit
/// and the projection operators. `h` is the Gaussian bandwidth; weights are
/// truncated to exactly zero beyond `h * cutoff_multiple`, which makes the
/// influence of a point strictly local and keeps the serial and worker-pool
/// code paths summing over identical neighbor sets.
struct KernelParams {
    double h = 1.0;
    double cutoff_multiple = 3.0;

    double support() const { return h * cutoff_multiple; }

    void validate() const {
        if (!(h > 0.0))
            throw InvalidParam("kernel bandwidth h must be positive");
        if (!(cutoff_multiple > 0.0))
            throw InvalidParam("kernel cutoff_multiple must be positive");
    }
};

/// Gaussian weight exp(-d^2/h^2), hard-truncated to 0 for d > h * cutoff_multiple.
/// Non-increasing in d, theta(0) = 1.
double theta(double d, const KernelParams& params);

/// Repulsion penalty 1/(3 d^3); strictly decreasing, diverges as d -> 0+.
double eta(double d);

/// |d eta / d d| = 1/d^4, used by the repulsion step of the projection operator.
double eta_derivative_magnitude(double d);

} // namespace pcs
