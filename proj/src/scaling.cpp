#include "wdt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wdt/errors.hpp"
#include "wdt/format.hpp"
#include "wdt/parallel.hpp"
#include "wdt/tfim.hpp"
#include "wdt/wasserstein.hpp"

namespace wdt {

namespace {

QuadratureConfig cfg_for(double quad_tol) {
    QuadratureConfig cfg;
    cfg.target_abs_tol = quad_tol;
    cfg.validate();
    return cfg;
}

void validate_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 3)
        throw InsufficientPoints("size fits need at least 3 sizes, got " +
                                 std::to_string(sizes.size()));
    int prev = 0;
    for (int L : sizes) {
        if (L < 20 || L % 2 != 0)
            throw std::invalid_argument("sizes must be even and >= 20, got " + std::to_string(L));
        if (L <= prev) throw std::invalid_argument("sizes must be strictly increasing");
        prev = L;
    }
}

FitResult fit_through(const std::vector<std::pair<double, double>>& pts, double offset) {
    if (offset == 0.0) return fit_power_law(pts);
    std::vector<std::pair<double, double>> shifted(pts);
    for (auto& p : shifted) p.second -= offset;
    return fit_power_law(shifted);
}

}  // namespace

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points) {
    size_t n = points.size();
    if (n < 3)
        throw InsufficientPoints("fit_power_law needs >= 3 points, got " + std::to_string(n));
    for (const auto& [x, y] : points)
        if (!(x > 0.0) || !(y > 0.0))
            throw NonPositiveData("fit_power_law: point (" + format_double(x) + ", " +
                                  format_double(y) + ") is not strictly positive");

    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DegenerateAbscissa("fit_power_law: all abscissae equal");

    FitResult f;
    f.exponent = sxy / sxx;
    f.amplitude = std::exp(my - f.exponent * mx);
    double sse = 0.0, sst = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double resid = ly[i] - (my + f.exponent * (lx[i] - mx));
        sse += resid * resid;
        sst += (ly[i] - my) * (ly[i] - my);
    }
    f.stderr_exponent = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    f.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    f.window = {lo->first, hi->first};
    f.n_points = static_cast<int>(n);
    return f;
}

SweepResult qfi_size_scaling(const std::vector<int>& sizes, double quad_tol, int parallelism,
                             TableStore* store) {
    validate_sizes(sizes);
    QuadratureConfig cfg = cfg_for(quad_tol);
    int max_l = sizes.back();
    CorrelatorTable table = get_or_compute(store, 1.0, max_l / 2, cfg);

    SweepResult r;
    r.points.resize(sizes.size());
    parallel_for(static_cast<int>(sizes.size()), parallelism, [&](int i) {
        int L = sizes[static_cast<size_t>(i)];
        GroundStateObservables o = mx_moments_from_table(table, 1.0, L);
        r.points[static_cast<size_t>(i)] = {static_cast<double>(L), qfi(o)};
    });
    r.fit = fit_power_law(r.points);
    return r;
}

SweepResult distance_size_scaling(double g_rho, double g_sigma, const std::vector<int>& sizes,
                                  double quad_tol, int parallelism, TableStore* store) {
    validate_sizes(sizes);
    if (!(g_rho > 0.0 && g_rho < 2.0) || !(g_sigma > 0.0 && g_sigma < 2.0))
        throw std::invalid_argument("distance_size_scaling: couplings must lie in (0, 2)");
    QuadratureConfig cfg = cfg_for(quad_tol);
    int max_l = sizes.back();
    CorrelatorTable t_rho = get_or_compute(store, g_rho, max_l / 2, cfg);
    CorrelatorTable t_sigma =
        g_sigma == g_rho ? t_rho : get_or_compute(store, g_sigma, max_l / 2, cfg);

    SweepResult r;
    r.points.resize(sizes.size());
    parallel_for(static_cast<int>(sizes.size()), parallelism, [&](int i) {
        int L = sizes[static_cast<size_t>(i)];
        GroundStateObservables a = mx_moments_from_table(t_rho, g_rho, L);
        GroundStateObservables b = mx_moments_from_table(t_sigma, g_sigma, L);
        r.points[static_cast<size_t>(i)] = {static_cast<double>(L),
                                            distance_squared(a, b).d_squared};
    });
    r.fit = fit_power_law(r.points);

    double gt = std::max(std::abs(g_rho - 1.0), std::abs(g_sigma - 1.0));
    if (gt > 0.0 && 1.0 / gt < static_cast<double>(max_l))
        r.fit.warning = "assumption violation: correlation length 1/|g-1| = " +
                        format_double(1.0 / gt) + " is below the largest size " +
                        std::to_string(max_l) + "; outside the finite-size scaling regime";
    return r;
}

SweepResult subleading_exponent(const std::vector<double>& g_sigma_grid, int L, double quad_tol,
                                int parallelism, double assumption_margin, TableStore* store) {
    if (L < 2) throw std::invalid_argument("subleading_exponent: L must be >= 2");
    if (!(assumption_margin > 0.0))
        throw std::invalid_argument("subleading_exponent: margin must be > 0");
    QuadratureConfig cfg = cfg_for(quad_tol);

    std::vector<double> kept;
    for (double g : g_sigma_grid)
        if (g > 1.0 && (g - 1.0) > assumption_margin / static_cast<double>(L)) kept.push_back(g);
    if (kept.empty())
        throw WindowEmpty("subleading_exponent: no grid point has correlation length below L/" +
                          format_double(assumption_margin));
    std::sort(kept.begin(), kept.end());

    GroundStateObservables ordered = mx_moments(0.0, L, cfg);
    double l2 = static_cast<double>(L) * L;

    SweepResult r;
    r.points.resize(kept.size());
    parallel_for(static_cast<int>(kept.size()), parallelism, [&](int i) {
        double g = kept[static_cast<size_t>(i)];
        CorrelatorTable t = get_or_compute(store, g, L / 2, cfg);
        GroundStateObservables o = mx_moments_from_table(t, g, L);
        double d2 = distance_squared(ordered, o).d_squared;
        r.points[static_cast<size_t>(i)] = {g - 1.0, (d2 / l2 - 0.5) * L};
    });
    r.fit = fit_power_law(r.points);
    return r;
}

SweepResult leading_exponent(const std::vector<double>& g_rho_grid, double g_sigma, int L,
                             double quad_tol, int parallelism, TableStore* store) {
    if (L < 2) throw std::invalid_argument("leading_exponent: L must be >= 2");
    if (!(g_sigma > 1.0))
        throw std::invalid_argument("leading_exponent: g_sigma must lie in the disordered phase");
    QuadratureConfig cfg = cfg_for(quad_tol);

    std::vector<double> kept;
    for (double g : g_rho_grid)
        if (g >= 0.0 && g < 1.0) kept.push_back(g);
    if (kept.empty())
        throw WindowEmpty("leading_exponent: no grid point lies in the ordered phase");
    std::sort(kept.begin(), kept.end(), std::greater<>());  // ascending in (-gt) = 1 - g

    CorrelatorTable t_sigma = get_or_compute(store, g_sigma, L / 2, cfg);
    GroundStateObservables disordered = mx_moments_from_table(t_sigma, g_sigma, L);
    double l2 = static_cast<double>(L) * L;

    SweepResult r;
    r.points.resize(kept.size());
    parallel_for(static_cast<int>(kept.size()), parallelism, [&](int i) {
        double g = kept[static_cast<size_t>(i)];
        CorrelatorTable t = get_or_compute(store, g, L / 2, cfg);
        GroundStateObservables o = mx_moments_from_table(t, g, L);
        double d2 = distance_squared(o, disordered).d_squared;
        r.points[static_cast<size_t>(i)] = {1.0 - g, d2 / l2};
    });

    // The gt-independent offset is measured at the smallest (-gt): the value
    // there minus the fitted power-law contribution, refined once (two
    // fit/subtract rounds).  More rounds keep absorbing signal into the
    // offset, because at moderate L the ordinate is not offset + pure power.
    double c = 0.0;
    for (int iter = 0; iter < 2; ++iter) {
        FitResult f = fit_through(r.points, c);
        c = r.points.front().second -
            f.amplitude * std::pow(r.points.front().first, f.exponent);
    }
    r.offset = c;
    r.fit = fit_through(r.points, c);
    return r;
}

}  // namespace wdt
