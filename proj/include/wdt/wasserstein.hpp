#pragma once

#include "wdt/tfim.hpp"

namespace wdt {

// D^2 with its three constituent terms kept separate:
//   d_squared = term_rho + term_sigma - cross
//             = 1/2 <Mx^2>_rho + 1/2 <Mx^2>_sigma - <Mx>_rho <Mx>_sigma.
struct DistanceResult {
    double d_squared = 0.0;
    double term_rho = 0.0;
    double term_sigma = 0.0;
    double cross = 0.0;
    double g_rho = 0.0;
    double g_sigma = 0.0;
    int L = 0;
};

// Order-2 distance between two pure ground states from their moments alone.
// Symmetric in (a, b); reduces to the variance when a = b.
DistanceResult distance_squared(const GroundStateObservables& a, const GroundStateObservables& b);

// 4 * (<Mx^2> - <Mx>^2) = 4 * distance_squared(a, a).d_squared.
double qfi(const GroundStateObservables& a);

}  // namespace wdt
