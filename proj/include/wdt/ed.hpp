#pragma once

#include <cstdint>
#include <vector>

namespace wdt {

// Brute-force ground state of the periodic chain on L <= 14 sites; the
// independent reference for the correlator conventions.
struct EDSolution {
    int L = 0;
    double g = 0.0;
    double energy = 0.0;
    std::vector<double> amplitudes;  // 2^L reals, z-product basis, unit norm
    bool degenerate = false;         // two lowest levels within 1e-10
};

// Lowest eigenstate of H = -sum sx_j sx_{j+1} - g sum sz_j (periodic).
// When the two lowest levels are quasi-degenerate the returned state is the
// combination of the two with maximal <Mx> (and <Mx> >= 0), matching the
// broken-symmetry description the magnetization formula assumes.
EDSolution ground_state(int L, double g);

// <sx_0 sx_n>, averaged over all translations; requires 1 <= n <= L/2.
double ed_xx_correlator(const EDSolution& sol, int n);

// (<Mx>, <Mx^2>) evaluated exactly in the 2^L space.
std::pair<double, double> ed_mx_moments(const EDSolution& sol);

namespace detail {
// y += H x, matrix-free over the full 2^L basis.
void apply_hamiltonian(int L, double g, const std::vector<double>& x, std::vector<double>& y);
}  // namespace detail

}  // namespace wdt
