#include "wdt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdt/errors.hpp"

namespace wdt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct GaussRule {
    std::vector<double> x;  // nodes on (-1, 1)
    std::vector<double> w;
};

// Nodes by Newton iteration on the Legendre recurrence; cached per order.
const GaussRule& gauss_rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(static_cast<size_t>(n));
    rule.w.resize(static_cast<size_t>(n));
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[static_cast<size_t>(i)] = -x;
        rule.x[static_cast<size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[static_cast<size_t>(i)] = w;
        rule.w[static_cast<size_t>(n - 1 - i)] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// Panel edges on [0, pi].  Uniform in the bulk, with the panel count scaling
// with the harmonic index; geometrically halved toward k = pi when ln g puts
// an integrable boundary layer there (couplings near critical).
std::vector<double> panel_edges(const KernelSpec& spec, const QuadratureConfig& cfg) {
    int P = std::max(cfg.panels, (std::abs(spec.harmonic_index) + 3) / 4);
    double h = kPi / P;
    std::vector<double> edges;
    edges.reserve(static_cast<size_t>(P) + 48);
    for (int i = 0; i < P; ++i) edges.push_back(i * h);

    double g = spec.coupling_g;
    double delta = g > 0.0 ? std::abs(std::log(g)) : 1.0;
    double lo = kPi - h;
    if (delta > 1e-10) {
        double wmin = std::max(delta / 8.0, 1e-13);
        double w = h / 2.0;
        while (w > wmin && (kPi - lo) > 8.0 * wmin) {
            lo += w;
            edges.push_back(lo);
            w /= 2.0;
        }
    }
    edges.push_back(kPi);
    return edges;
}

double integrand(const KernelSpec& spec, double k) {
    double m = spec.harmonic_index;
    double g = spec.coupling_g;
    double ch = std::cos(0.5 * k);
    if (spec.kind == KernelKind::L_KERNEL) {
        // 1 + 1/g^2 + (2/g) cos k  ==  (1 - 1/g)^2 + (4/g) cos^2(k/2)
        double gi = 1.0 / g;
        double lam2 = (1.0 - gi) * (1.0 - gi) + 4.0 * gi * ch * ch;
        if (lam2 <= 0.0) throw SingularIntegrand("l_integral: vanishing denominator");
        return std::cos(m * k) / std::sqrt(lam2);
    }
    // 1 + g^2 + 2 g cos k  ==  (1 - g)^2 + 4 g cos^2(k/2)
    double lam2 = (1.0 - g) * (1.0 - g) + 4.0 * g * ch * ch;
    if (lam2 <= 0.0) throw SingularIntegrand("g_integral: vanishing denominator");
    double sh = std::sin(0.5 * k);
    double num = std::cos(m * k) * ((g - 1.0) + 2.0 * ch * ch) -
                 std::sin(m * k) * (2.0 * sh * ch);
    return num / std::sqrt(lam2);
}

double refine(const KernelSpec& spec, const QuadratureConfig& cfg) {
    double prev = detail::kernel_quadrature_once(spec, cfg, cfg.nodes_per_panel);
    int nodes = cfg.nodes_per_panel;
    for (int round = 0; round < cfg.refinement_limit; ++round) {
        nodes *= 2;
        double next = detail::kernel_quadrature_once(spec, cfg, nodes);
        if (std::abs(next - prev) <= cfg.target_abs_tol) return next;
        prev = next;
    }
    throw NonConvergence("kernel integral (index " + std::to_string(spec.harmonic_index) +
                         ", g " + std::to_string(spec.coupling_g) + ") did not reach " +
                         std::to_string(cfg.target_abs_tol) + " within the refinement limit");
}

}  // namespace

void QuadratureConfig::validate() const {
    if (nodes_per_panel < 8) throw std::invalid_argument("nodes_per_panel must be >= 8");
    if (panels < 1) throw std::invalid_argument("panels must be >= 1");
    if (!(target_abs_tol > 0.0)) throw std::invalid_argument("target_abs_tol must be > 0");
    if (refinement_limit < 1) throw std::invalid_argument("refinement_limit must be >= 1");
}

namespace detail {

double kernel_quadrature_once(const KernelSpec& spec, const QuadratureConfig& cfg,
                              int nodes_per_panel, bool reverse_panels) {
    const GaussRule& rule = gauss_rule(nodes_per_panel);
    std::vector<double> edges = panel_edges(spec, cfg);
    int panels = static_cast<int>(edges.size()) - 1;

    double sum = 0.0, comp = 0.0;  // compensated summation
    for (int pi = 0; pi < panels; ++pi) {
        int p = reverse_panels ? panels - 1 - pi : pi;
        double a = edges[static_cast<size_t>(p)];
        double b = edges[static_cast<size_t>(p) + 1];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < nodes_per_panel; ++i) {
            double k = mid + half * rule.x[static_cast<size_t>(i)];
            double term = half * rule.w[static_cast<size_t>(i)] * integrand(spec, k);
            double y = term - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum / kPi;
}

}  // namespace detail

double l_integral(int n, double g, const QuadratureConfig& cfg) {
    cfg.validate();
    if (n < 0) throw std::invalid_argument("l_integral: n must be >= 0");
    if (!(g > 0.0)) throw std::invalid_argument("l_integral: g must be > 0");
    if (std::abs(g - 1.0) < 0.1)
        throw SingularIntegrand(
            "l_integral diverges logarithmically at g = 1; use g_integral near the critical "
            "coupling (|g - 1| < 0.1)");
    return refine({n, g, KernelKind::L_KERNEL}, cfg);
}

double g_integral(int m, double g, const QuadratureConfig& cfg) {
    cfg.validate();
    if (g < 0.0) throw std::invalid_argument("g_integral: g must be >= 0");
    if (g == 0.0) return m == -1 ? 1.0 : 0.0;
    if (g > 1e6) {
        // lambda = g + cos k + O(1/g); the 1/(2g) terms are the first
        // correction, below target tolerance for g this large.
        double v = m == 0 ? 1.0 : 0.0;
        if (m == 1) v -= 0.5 / g;
        if (m == -1) v += 0.5 / g;
        return v;
    }
    return refine({m, g, KernelKind::G_KERNEL}, cfg);
}

}  // namespace wdt
