#include "pcs/kernels.hpp"

#include <cassert>
#include <cmath>

namespace pcs {

double theta(double d, const KernelParams& params) {
    params.validate();
    assert(d >= 0.0);
    if (d > params.support())
        return 0.0;
    const double s = d / params.h;
    return std::exp(-s * s);
}

double eta(double d) {
    if (!(d > 0.0))
        throw InvalidParam("eta requires d > 0");
    return 1.0 / (3.0 * d * d * d);
}

double eta_derivative_magnitude(double d) {
    if (!(d > 0.0))
        throw InvalidParam("eta_derivative_magnitude requires d > 0");
    const double d2 = d * d;
    return 1.0 / (d2 * d2);
}

} // namespace pcs
