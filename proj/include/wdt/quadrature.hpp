#pragma once

#include <cstdint>

namespace wdt {

// Composite Gauss-Legendre quadrature on [0, pi] for the oscillatory kernel
// integrals behind the Toeplitz correlator construction.  The effective panel
// count grows with the harmonic index so that every oscillation period keeps
// at least ~8 nodes, and panels are geometrically refined toward k = pi when
// the coupling sits close to the critical point, where the integrand develops
// a boundary layer of width |ln g|.
struct QuadratureConfig {
    int nodes_per_panel = 32;     // >= 8
    int panels = 8;               // >= 1, lower bound; scaled up with |index|
    double target_abs_tol = 1e-12;
    int refinement_limit = 6;     // node-doubling rounds before giving up

    void validate() const;
};

enum class KernelKind { L_KERNEL, G_KERNEL };

struct KernelSpec {
    int harmonic_index = 0;
    double coupling_g = 0.0;
    KernelKind kind = KernelKind::G_KERNEL;
};

// L(n) = (1/pi) Int_0^pi cos(n k) / sqrt(1 + 1/g^2 + (2/g) cos k) dk.
// Requires g > 0 and |g - 1| >= 0.1: the integrand diverges logarithmically
// at the critical coupling, where only the combined kernel is usable.
double l_integral(int n, double g, const QuadratureConfig& cfg = {});

// G(m) = (1/pi) Int_0^pi [cos(k m)(g + cos k) - sin(k m) sin k]
//                        / sqrt(1 + g^2 + 2 g cos k) dk.
// Finite for all g >= 0 including g = 1.  g = 0 and g > 1e6 short-circuit to
// their analytic limits.
double g_integral(int m, double g, const QuadratureConfig& cfg = {});

namespace detail {
// Single fixed-node evaluation (no refinement); exposed for the node-doubling
// stability checks.  reverse_panels flips the summation order, which must not
// change the result beyond rounding noise.
double kernel_quadrature_once(const KernelSpec& spec, const QuadratureConfig& cfg,
                              int nodes_per_panel, bool reverse_panels = false);
}  // namespace detail

}  // namespace wdt
