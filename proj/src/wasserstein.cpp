#include "wdt/wasserstein.hpp"

#include <string>

#include "wdt/errors.hpp"

namespace wdt {

DistanceResult distance_squared(const GroundStateObservables& a, const GroundStateObservables& b) {
    if (a.L != b.L)
        throw SizeMismatch("distance_squared: ring sizes differ (" + std::to_string(a.L) +
                           " vs " + std::to_string(b.L) + ")");
    DistanceResult r;
    r.term_rho = 0.5 * a.mx2_mean;
    r.term_sigma = 0.5 * b.mx2_mean;
    r.cross = a.mx_mean * b.mx_mean;
    r.d_squared = r.term_rho + r.term_sigma - r.cross;
    r.g_rho = a.g;
    r.g_sigma = b.g;
    r.L = a.L;
    return r;
}

double qfi(const GroundStateObservables& a) {
    double var = distance_squared(a, a).d_squared;
    if (var < -1e-9)
        throw NegativeVariance("qfi: <Mx^2> - <Mx>^2 = " + std::to_string(var) +
                               " (upstream correlator defect)");
    if (var < 0.0) var = 0.0;
    return 4.0 * var;
}

}  // namespace wdt
