#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wdt/quadrature.hpp"
#include "wdt/store.hpp"

namespace wdt {

// One power-law regression y = amplitude * x^exponent, done by ordinary least
// squares on (ln x, ln y).
struct FitResult {
    double exponent = 0.0;
    double amplitude = 0.0;
    double stderr_exponent = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};  // abscissa range actually used
    int n_points = 0;
    std::string warning;  // non-fatal diagnostics (scaling-assumption checks)
};

enum class SweepMode { QFI_VS_L, D2_VS_L, SUBLEADING_VS_G, LEADING_VS_G };

struct SweepSpec {
    std::vector<double> g_rho;   // single value or grid
    std::vector<double> g_sigma; // single value or grid
    std::vector<int> sizes;
    double quad_tol = 1e-12;
    SweepMode mode = SweepMode::QFI_VS_L;
};

// Fit plus the sweep table behind it, in fit order.  For the leading-exponent
// sweep, `offset` is the fitted additive constant and points hold the raw
// (unsubtracted) ordinates.
struct SweepResult {
    std::vector<std::pair<double, double>> points;  // (x, y)
    FitResult fit;
    double offset = 0.0;
};

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

// F_Q(g = 1, L) against L over the given sizes; expected exponent 7/4.
SweepResult qfi_size_scaling(const std::vector<int>& sizes, double quad_tol, int parallelism = 1,
                             TableStore* store = nullptr);

// D^2(rho, sigma) against L; approaches the QFI exponent as both couplings
// approach the critical point.  Sets a warning when the correlation length
// drops below the largest size (finite-size regime no longer guaranteed).
SweepResult distance_size_scaling(double g_rho, double g_sigma, const std::vector<int>& sizes,
                                  double quad_tol, int parallelism = 1,
                                  TableStore* store = nullptr);

// y = (D^2/L^2 - 1/2) * L against gt = g_sigma - 1 at fixed L, g_rho = 0,
// keeping only grid points with correlation length below L / margin; expected
// exponent -3/4.
SweepResult subleading_exponent(const std::vector<double>& g_sigma_grid, int L, double quad_tol,
                                int parallelism = 1, double assumption_margin = 10.0,
                                TableStore* store = nullptr);

// D^2/L^2 against (-gt_rho) at fixed L and disordered g_sigma, after
// subtracting the gt-independent offset measured at the smallest (-gt_rho);
// the offset is refined by one fit/subtract round.  Expected exponent 1/4.
SweepResult leading_exponent(const std::vector<double>& g_rho_grid, double g_sigma, int L,
                             double quad_tol, int parallelism = 1, TableStore* store = nullptr);

}  // namespace wdt
