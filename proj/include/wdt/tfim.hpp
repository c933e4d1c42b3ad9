#pragma once

#include <vector>

#include "wdt/quadrature.hpp"

namespace wdt {

enum class CorrelatorMethod { LEVINSON_MINORS, LU_PER_N };

// C(n) = <sx_0 sx_n> for one coupling g, n = 1..n_max, on the infinite chain.
struct CorrelatorTable {
    double g = 0.0;
    int n_max = 0;
    std::vector<double> values;  // values[n-1] = C(n)
    double tol = 0.0;            // quadrature tolerance used
    CorrelatorMethod method = CorrelatorMethod::LEVINSON_MINORS;

    double at(int n) const { return values.at(static_cast<size_t>(n) - 1); }
};

// (g, L, <Mx>, <Mx^2>) for one periodic ring; the sole input to the distance.
struct GroundStateObservables {
    double g = 0.0;
    int L = 0;
    double mx_mean = 0.0;
    double mx2_mean = 0.0;
};

// Spontaneous transverse magnetization per site: (1 - g^2)^{1/8} for g <= 1,
// zero above; used at every system size.
double magnetization(double g);

// All C(1..n_max) as the chain of leading principal minors of the one-sided
// Toeplitz matrix with entries G(i - j - 1).  Levinson-style minor recursion,
// O(n_max^2); falls back to per-n pivoted elimination if the recursion passes
// within 1e-13 of a zero minor.
CorrelatorTable correlator_table(double g, int n_max, const QuadratureConfig& cfg = {});

// <Mx> = L * magnetization(g);
// <Mx^2> = L * [1 + sum_{d=1}^{L-1} C(min(d, L-d))].
GroundStateObservables mx_moments(double g, int L, const QuadratureConfig& cfg = {});

// Same assembly from an existing table (which must cover n <= L/2); C(n) does
// not depend on n_max, so one large table serves every smaller ring.
GroundStateObservables mx_moments_from_table(const CorrelatorTable& t, double g, int L);

namespace detail {
// Per-n determinants via pivoted elimination, O(n^3) each; the reference
// implementation for the minor recursion and the breakdown fallback.
CorrelatorTable correlator_table_lu(double g, int n_max, const QuadratureConfig& cfg);

// Minor recursion over a caller-supplied kernel slice; throws
// RecursionBreakdown when a leading minor passes within breakdown_tol of zero.
std::vector<double> levinson_minor_chain(const std::vector<double>& kernel, int n_max,
                                         double breakdown_tol = 1e-13);

// Kernel values G(-n_max .. n_max-1); kernel[m + n_max] = G(m).
std::vector<double> kernel_values(double g, int n_max, const QuadratureConfig& cfg);
}  // namespace detail

}  // namespace wdt
