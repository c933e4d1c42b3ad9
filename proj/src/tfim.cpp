#include "wdt/tfim.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "wdt/errors.hpp"

namespace wdt {

namespace {

// Determinant by in-place partial-pivot elimination; adequate for the per-n
// fallback path where n stays small.
double det_pivoted(std::vector<double> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a[static_cast<size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a[static_cast<size_t>(r) * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<size_t>(piv) * n + c], a[static_cast<size_t>(col) * n + c]);
            det = -det;
        }
        double d = a[static_cast<size_t>(col) * n + col];
        det *= d;
        for (int r = col + 1; r < n; ++r) {
            double f = a[static_cast<size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<size_t>(r) * n + c] -= f * a[static_cast<size_t>(col) * n + c];
        }
    }
    return det;
}

void clamp_small_values(CorrelatorTable& t) {
    int clamped = 0;
    for (double& v : t.values) {
        if (v != 0.0 && std::abs(v) < 1e-15) { v = 0.0; ++clamped; }
    }
    if (clamped > 0)
        std::cerr << "correlator_table: clamped " << clamped
                  << " value(s) below 1e-15 to zero (g = " << t.g << ", n_max = " << t.n_max
                  << ")\n";
}

}  // namespace

double magnetization(double g) {
    if (g < 0.0) throw std::invalid_argument("magnetization: g must be >= 0");
    if (g > 1.0) return 0.0;
    return std::pow(1.0 - g * g, 0.125);
}

namespace detail {

std::vector<double> kernel_values(double g, int n_max, const QuadratureConfig& cfg) {
    // kernel[m + n_max] = G(m) for m in [-n_max, n_max - 1]
    std::vector<double> kernel(static_cast<size_t>(2 * n_max));
    for (int m = -n_max; m < n_max; ++m)
        kernel[static_cast<size_t>(m + n_max)] = g_integral(m, g, cfg);
    return kernel;
}

// Minors D_n = det[ t_{i-j} ]_{i,j=1..n} with t_d = G(d - 1), via the
// two-sided (nonsymmetric) Levinson recursion.  Maintains x_m = T_m^{-1} c_m
// and w_m = T_m^{-1} s_m, where c_m is the column under the top-left corner
// and s_m the column above the bottom-right corner; the Schur-complement
// ratio alpha_{m+1} = D_{m+1}/D_m = t_0 - r_m . x_m updates both in O(m).
std::vector<double> levinson_minor_chain(const std::vector<double>& kernel, int n_max,
                                         double breakdown_tol) {
    if (n_max < 1) throw std::invalid_argument("levinson_minor_chain: n_max must be >= 1");
    if (kernel.size() < static_cast<size_t>(2 * n_max))
        throw std::invalid_argument("levinson_minor_chain: kernel slice too short");
    int off = n_max;  // kernel[d - 1 + off] = t_d, valid for d in [-n_max+1, n_max]
    auto t = [&](int d) { return kernel[static_cast<size_t>(d - 1 + off)]; };

    std::vector<double> minors(static_cast<size_t>(n_max));
    double d0 = t(0);
    if (!(std::abs(d0) > breakdown_tol))
        throw RecursionBreakdown("leading minor within tolerance of zero at order 1");
    minors[0] = d0;
    if (n_max == 1) return minors;

    double det = d0;
    std::vector<double> x{t(1) / d0};
    std::vector<double> w{t(-1) / d0};
    std::vector<double> x_next, w_next;
    for (int m = 1; m < n_max; ++m) {
        double rx = 0.0, ux = 0.0, rw = 0.0;
        for (int j = 1; j <= m; ++j) {
            rx += t(-j) * x[static_cast<size_t>(j - 1)];
            ux += t(m + 1 - j) * x[static_cast<size_t>(j - 1)];
            rw += t(-j) * w[static_cast<size_t>(j - 1)];
        }
        double alpha = t(0) - rx;
        if (!std::isfinite(alpha) || std::abs(alpha) < breakdown_tol)
            throw RecursionBreakdown("leading minor within tolerance of zero at order " +
                                     std::to_string(m + 1));
        det *= alpha;
        minors[static_cast<size_t>(m)] = det;
        if (m == n_max - 1) break;

        double xi = (t(m + 1) - ux) / alpha;
        double eta = (t(-m - 1) - rw) / alpha;
        x_next.resize(static_cast<size_t>(m) + 1);
        w_next.resize(static_cast<size_t>(m) + 1);
        for (int j = 0; j < m; ++j) {
            x_next[static_cast<size_t>(j)] =
                x[static_cast<size_t>(j)] - xi * w[static_cast<size_t>(j)];
            w_next[static_cast<size_t>(j) + 1] =
                w[static_cast<size_t>(j)] - eta * x[static_cast<size_t>(j)];
        }
        x_next[static_cast<size_t>(m)] = xi;
        w_next[0] = eta;
        x.swap(x_next);
        w.swap(w_next);
    }
    return minors;
}

CorrelatorTable correlator_table_lu(double g, int n_max, const QuadratureConfig& cfg) {
    std::vector<double> kernel = kernel_values(g, n_max, cfg);
    CorrelatorTable t;
    t.g = g;
    t.n_max = n_max;
    t.tol = cfg.target_abs_tol;
    t.method = CorrelatorMethod::LU_PER_N;
    t.values.resize(static_cast<size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        std::vector<double> a(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a[static_cast<size_t>(i) * n + j] = kernel[static_cast<size_t>(i - j - 1 + n_max)];
        t.values[static_cast<size_t>(n - 1)] = det_pivoted(std::move(a), n);
    }
    clamp_small_values(t);
    return t;
}

}  // namespace detail

CorrelatorTable correlator_table(double g, int n_max, const QuadratureConfig& cfg) {
    cfg.validate();
    if (n_max < 1) throw std::invalid_argument("correlator_table: n_max must be >= 1");
    if (g < 0.0) throw std::invalid_argument("correlator_table: g must be >= 0");

    std::vector<double> kernel = detail::kernel_values(g, n_max, cfg);
    CorrelatorTable t;
    t.g = g;
    t.n_max = n_max;
    t.tol = cfg.target_abs_tol;
    try {
        t.values = detail::levinson_minor_chain(kernel, n_max);
        t.method = CorrelatorMethod::LEVINSON_MINORS;
    } catch (const RecursionBreakdown&) {
        return detail::correlator_table_lu(g, n_max, cfg);
    }
    clamp_small_values(t);
    return t;
}

GroundStateObservables mx_moments(double g, int L, const QuadratureConfig& cfg) {
    if (L < 2) throw std::invalid_argument("mx_moments: L must be >= 2");
    CorrelatorTable t = correlator_table(g, L / 2, cfg);
    return mx_moments_from_table(t, g, L);
}

GroundStateObservables mx_moments_from_table(const CorrelatorTable& t, double g, int L) {
    if (L < 2) throw std::invalid_argument("mx_moments_from_table: L must be >= 2");
    if (t.n_max < L / 2)
        throw SizeMismatch("mx_moments_from_table: table covers n <= " + std::to_string(t.n_max) +
                           ", ring needs n <= " + std::to_string(L / 2));
    double sum = 1.0, comp = 0.0;  // n = 0 local term, then compensated ring sum
    for (int d = 1; d < L; ++d) {
        int n = d < L - d ? d : L - d;
        double term = t.values[static_cast<size_t>(n - 1)];
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    GroundStateObservables o;
    o.g = g;
    o.L = L;
    o.mx_mean = L * magnetization(g);
    o.mx2_mean = L * sum;
    return o;
}

}  // namespace wdt
