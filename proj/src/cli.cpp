#include "wdt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wdt/ed.hpp"
#include "wdt/errors.hpp"
#include "wdt/format.hpp"
#include "wdt/parallel.hpp"
#include "wdt/quadrature.hpp"
#include "wdt/scaling.hpp"
#include "wdt/store.hpp"
#include "wdt/tfim.hpp"
#include "wdt/wasserstein.hpp"

namespace wdt {
namespace {

using nlohmann::json;

const std::vector<int> kDefaultSizes{20,  40,  80,  120, 150, 200, 250,
                                     300, 350, 400, 450, 500, 600, 700};

struct GlobalOpts {
    std::string format = "csv";
    int parallelism = 1;
    double quad_tol = 1e-12;
    std::string cache_dir = "./wcache";
};

// One output field, carried in both renderings so CSV and JSON stay
// content-identical.
struct Field {
    std::string key;
    std::string csv;
    json value;
};

Field fnum(std::string key, double v) {
    std::string s = format_double(v);
    return {std::move(key), std::move(s), v};
}

Field fint(std::string key, long long v) { return {std::move(key), std::to_string(v), v}; }

Field fstr(std::string key, const std::string& v) { return {std::move(key), v, v}; }

QuadratureConfig cfg_for(double quad_tol) {
    QuadratureConfig cfg;
    cfg.target_abs_tol = quad_tol;
    cfg.validate();
    return cfg;
}

// Single logical record: one wide CSV row, or one JSON object.
void write_record(std::ostream& out, const GlobalOpts& go, const std::vector<Field>& fields) {
    if (go.format == "json") {
        json j = json::object();
        for (const auto& f : fields) j[f.key] = f.value;
        out << j.dump() << "\n";
        return;
    }
    for (size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].key;
    out << "\n";
    for (size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].csv;
    out << "\n";
}

// Sweep table plus its fit.  In CSV the fit arrives as trailing comment
// lines with the exponent last, so line-oriented consumers can read the
// headline number from the final line.
void write_sweep(std::ostream& out, const GlobalOpts& go, const std::vector<Field>& params,
                 const char* x_name, const char* y_name,
                 const std::vector<std::pair<double, double>>& points, const FitResult& fit,
                 double offset) {
    std::vector<Field> tail;
    tail.push_back(fnum("amplitude", fit.amplitude));
    tail.push_back(fnum("stderr", fit.stderr_exponent));
    tail.push_back(fnum("r_squared", fit.r_squared));
    tail.push_back(fnum("window_min", fit.window.first));
    tail.push_back(fnum("window_max", fit.window.second));
    tail.push_back(fint("n_points", fit.n_points));
    tail.push_back(fnum("offset", offset));
    if (!fit.warning.empty()) tail.push_back(fstr("warning", fit.warning));
    tail.push_back(fnum("exponent", fit.exponent));

    if (go.format == "json") {
        json j = json::object();
        for (const auto& f : params) j[f.key] = f.value;
        json pts = json::array();
        for (const auto& p : points) pts.push_back({p.first, p.second});
        j["points"] = std::move(pts);
        for (const auto& f : tail) j[f.key] = f.value;
        out << j.dump() << "\n";
        return;
    }
    for (const auto& f : params) out << "# " << f.key << ": " << f.csv << "\n";
    out << x_name << "," << y_name << "\n";
    for (const auto& p : points)
        out << format_double(p.first) << "," << format_double(p.second) << "\n";
    for (const auto& f : tail) out << "# " << f.key << ": " << f.csv << "\n";
}

void write_grid(std::ostream& out, const GlobalOpts& go, const std::vector<Field>& params,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
    if (go.format == "json") {
        json j = json::object();
        for (const auto& f : params) j[f.key] = f.value;
        json data = json::array();
        for (const auto& r : rows) data.push_back(r);
        j["rows"] = std::move(data);
        out << j.dump() << "\n";
        return;
    }
    for (const auto& f : params) out << "# " << f.key << ": " << f.csv << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << "\n";
    }
}

const char* method_label(CorrelatorMethod m) {
    return m == CorrelatorMethod::LEVINSON_MINORS ? "LEVINSON_MINORS" : "LU_PER_N";
}

void write_correlator(std::ostream& out, const GlobalOpts& go, const CorrelatorTable& t) {
    if (go.format == "json") {
        json j = json::object();
        j["format_version"] = kStoreFormatVersion;
        j["g"] = t.g;
        j["n_max"] = t.n_max;
        j["quad_tol"] = t.tol;
        j["method"] = method_label(t.method);
        j["values"] = t.values;
        out << j.dump() << "\n";
        return;
    }
    out << detail::serialize_table(t);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("grid bounds must satisfy 0 < grid-min < grid-max");
    if (n < 2) throw std::invalid_argument("grid-points must be at least 2");
    std::vector<double> xs(static_cast<size_t>(n));
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        xs[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

GroundStateObservables cached_moments(TableStore* store, double g, int L,
                                      const QuadratureConfig& cfg) {
    CorrelatorTable t = get_or_compute(store, g, std::max(1, L / 2), cfg);
    return mx_moments_from_table(t, g, L);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    GlobalOpts go;

    CLI::App app{
        "Order-2 Wasserstein distances between transverse-field Ising ground states:\n"
        "exact correlator tables, distance/QFI evaluation, an exact-diagonalization\n"
        "cross-check, and the scaling sweeps behind the critical exponents."};
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--format", go.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--parallelism", go.parallelism, "Worker threads (output is byte-identical for any value)")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    app.add_option("--quad-tol", go.quad_tol, "Absolute quadrature tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--cache-dir", go.cache_dir, "Correlator table cache directory")
        ->envname("WDT_CACHE_DIR")
        ->capture_default_str();

    double c_g = 1.0;
    int c_nmax = 50;
    auto* sc_corr = app.add_subcommand("correlator", "Exact <sx_0 sx_n> for n = 1..n-max at one coupling");
    sc_corr->add_option("--g", c_g, "Transverse coupling g = h/J")
        ->required()
        ->check(CLI::NonNegativeNumber);
    sc_corr->add_option("--n-max", c_nmax, "Largest separation")->required()->check(CLI::Range(1, 200000));

    double o_g = 1.0;
    int o_L = 100;
    auto* sc_obs = app.add_subcommand("observables", "Ground-state <Mx> and <Mx^2> on a periodic ring");
    sc_obs->add_option("--g", o_g, "Transverse coupling")->required()->check(CLI::NonNegativeNumber);
    sc_obs->add_option("--L", o_L, "Ring size")->required();

    double d_grho = 0.0, d_gsigma = 2.0;
    int d_L = 500;
    auto* sc_dist = app.add_subcommand("distance", "Squared order-2 Wasserstein distance between two ground states");
    sc_dist->add_option("--g-rho", d_grho, "Coupling of the first state")
        ->required()
        ->check(CLI::NonNegativeNumber);
    sc_dist->add_option("--g-sigma", d_gsigma, "Coupling of the second state")
        ->required()
        ->check(CLI::NonNegativeNumber);
    sc_dist->add_option("--L", d_L, "Ring size")->required();

    double q_g = 1.0;
    int q_L = 100;
    auto* sc_qfi = app.add_subcommand("qfi", "Quantum Fisher information 4*Var(Mx) of one ground state");
    sc_qfi->add_option("--g", q_g, "Transverse coupling")->required()->check(CLI::NonNegativeNumber);
    sc_qfi->add_option("--L", q_L, "Ring size")->required();

    double e_g = 1.0;
    int e_L = 10;
    auto* sc_ed = app.add_subcommand("oracle", "Brute-force diagonalization cross-check (L <= 14)");
    sc_ed->add_option("--g", e_g, "Transverse coupling")->required()->check(CLI::NonNegativeNumber);
    sc_ed->add_option("--L", e_L, "Ring size")->required();

    std::string f_mode;
    std::vector<int> f_sizes = kDefaultSizes;
    double f_grho = std::nan(""), f_gsigma = std::nan("");
    int f_L = -1;
    double f_gmin = std::nan(""), f_gmax = std::nan("");
    int f_gpts = 12;
    double f_margin = 10.0;
    auto* sc_fit = app.add_subcommand("fit", "Power-law exponent extraction over a size sweep or coupling grid");
    sc_fit->add_option("--mode", f_mode,
                       "qfi: F_Q vs L at g=1 | d2: D^2 vs L | subleading: (D^2/L^2 - 1/2)*L vs "
                       "g_sigma-1 | leading: D^2/L^2 vs 1-g_rho")
        ->required()
        ->check(CLI::IsMember({"qfi", "d2", "subleading", "leading"}));
    sc_fit->add_option("--sizes", f_sizes, "Ring sizes for qfi/d2 modes")
        ->delimiter(',')
        ->capture_default_str();
    sc_fit->add_option("--g-rho", f_grho, "First coupling (d2 mode; default 0.99999)");
    sc_fit->add_option("--g-sigma", f_gsigma,
                       "Second coupling (d2 mode default 1.00001; leading mode default 10)");
    sc_fit->add_option("--L", f_L, "Ring size (subleading default 700, leading default 500)");
    sc_fit->add_option("--grid-min", f_gmin,
                       "Smallest |g-1| on the grid (subleading default 0.02, leading default 3e-3)");
    sc_fit->add_option("--grid-max", f_gmax,
                       "Largest |g-1| on the grid (subleading default 0.2, leading default 3e-2)");
    sc_fit->add_option("--grid-points", f_gpts, "Log-spaced grid size")->capture_default_str();
    sc_fit->add_option("--margin", f_margin,
                       "Subleading mode keeps points with g-1 > margin/L")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* sc_rep = app.add_subcommand("reproduce", "Full data table behind one figure of the study");
    sc_rep->require_subcommand(1);

    int r1_L = 500, r1_pts = 81;
    std::vector<double> r1_rhos{0.0, 0.4, 0.8, 1.0};
    auto* f1 = sc_rep->add_subcommand(
        "fig1", "D^2/L^2 against g_sigma for several g_rho (curve set and grid density are tool "
                "defaults chosen to span both phases; override with flags)");
    f1->add_option("--L", r1_L, "Ring size")->capture_default_str();
    f1->add_option("--points", r1_pts, "Number of g_sigma samples on [0, 2]")
        ->check(CLI::Range(2, 100001))
        ->capture_default_str();
    f1->add_option("--g-rho-set", r1_rhos, "g_rho curves")
        ->delimiter(',')
        ->capture_default_str();

    std::vector<int> r2a_sizes = kDefaultSizes;
    auto* f2a = sc_rep->add_subcommand("fig2a", "Critical QFI F_Q(g=1, L) against L, with power-law fit");
    f2a->add_option("--sizes", r2a_sizes, "Ring sizes")->delimiter(',')->capture_default_str();

    std::vector<int> r2b_sizes = kDefaultSizes;
    double r2b_gt = 1e-5;
    auto* f2b = sc_rep->add_subcommand(
        "fig2b", "Near-critical D^2(1-gt, 1+gt) against L, with power-law fit");
    f2b->add_option("--sizes", r2b_sizes, "Ring sizes")->delimiter(',')->capture_default_str();
    f2b->add_option("--g-tilde", r2b_gt, "Detuning gt")->check(CLI::PositiveNumber)->capture_default_str();

    int r3a_L = 700, r3a_pts = 12;
    double r3a_gmin = 0.02, r3a_gmax = 0.2, r3a_margin = 10.0;
    auto* f3a = sc_rep->add_subcommand(
        "fig3a", "Subleading distance term against g_sigma - 1 at g_rho = 0, with power-law fit");
    f3a->add_option("--L", r3a_L, "Ring size")->capture_default_str();
    f3a->add_option("--grid-min", r3a_gmin, "Smallest g_sigma - 1")->capture_default_str();
    f3a->add_option("--grid-max", r3a_gmax, "Largest g_sigma - 1")->capture_default_str();
    f3a->add_option("--grid-points", r3a_pts, "Log-spaced grid size")->capture_default_str();
    f3a->add_option("--margin", r3a_margin, "Keep points with g_sigma - 1 > margin/L")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    int r3b_L = 500, r3b_pts = 12;
    double r3b_gsigma = 10.0, r3b_gmin = 3e-3, r3b_gmax = 3e-2;
    auto* f3b = sc_rep->add_subcommand(
        "fig3b", "Leading distance term against 1 - g_rho at disordered g_sigma, with power-law fit");
    f3b->add_option("--L", r3b_L, "Ring size")->capture_default_str();
    f3b->add_option("--g-sigma", r3b_gsigma, "Disordered-side coupling")->capture_default_str();
    f3b->add_option("--grid-min", r3b_gmin, "Smallest 1 - g_rho")->capture_default_str();
    f3b->add_option("--grid-max", r3b_gmax, "Largest 1 - g_rho")->capture_default_str();
    f3b->add_option("--grid-points", r3b_pts, "Log-spaced grid size")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        QuadratureConfig cfg = cfg_for(go.quad_tol);

        if (sc_corr->parsed()) {
            TableStore store(go.cache_dir);
            write_correlator(out, go, get_or_compute(&store, c_g, c_nmax, cfg));
            return 0;
        }

        if (sc_obs->parsed()) {
            TableStore store(go.cache_dir);
            GroundStateObservables obs = cached_moments(&store, o_g, o_L, cfg);
            write_record(out, go,
                         {fnum("g", obs.g), fint("L", obs.L), fnum("mx_mean", obs.mx_mean),
                          fnum("mx2_mean", obs.mx2_mean)});
            return 0;
        }

        if (sc_dist->parsed()) {
            TableStore store(go.cache_dir);
            GroundStateObservables rho = cached_moments(&store, d_grho, d_L, cfg);
            GroundStateObservables sigma = cached_moments(&store, d_gsigma, d_L, cfg);
            DistanceResult r = distance_squared(rho, sigma);
            write_record(out, go,
                         {fnum("g_rho", r.g_rho), fnum("g_sigma", r.g_sigma), fint("L", r.L),
                          fnum("term_rho", r.term_rho), fnum("term_sigma", r.term_sigma),
                          fnum("cross", r.cross), fnum("d_squared", r.d_squared),
                          fnum("d2_over_l2", r.d_squared / (static_cast<double>(r.L) * r.L))});
            return 0;
        }

        if (sc_qfi->parsed()) {
            TableStore store(go.cache_dir);
            GroundStateObservables obs = cached_moments(&store, q_g, q_L, cfg);
            write_record(out, go, {fnum("g", obs.g), fint("L", obs.L), fnum("qfi", qfi(obs))});
            return 0;
        }

        if (sc_ed->parsed()) {
            EDSolution sol = ground_state(e_L, e_g);
            auto [mx, mx2] = ed_mx_moments(sol);
            std::vector<Field> fields{fint("L", sol.L),
                                      fnum("g", sol.g),
                                      fnum("energy", sol.energy),
                                      fint("degenerate", sol.degenerate ? 1 : 0),
                                      fnum("mx_mean", mx),
                                      fnum("mx2_mean", mx2)};
            for (int n = 1; n <= sol.L / 2; ++n)
                fields.push_back(fnum("c_" + std::to_string(n), ed_xx_correlator(sol, n)));
            write_record(out, go, fields);
            return 0;
        }

        if (sc_fit->parsed()) {
            TableStore store(go.cache_dir);
            if (f_mode == "qfi") {
                SweepResult r = qfi_size_scaling(f_sizes, go.quad_tol, go.parallelism, &store);
                write_sweep(out, go, {fstr("mode", "qfi"), fnum("quad_tol", go.quad_tol)}, "L",
                            "qfi", r.points, r.fit, r.offset);
                return 0;
            }
            if (f_mode == "d2") {
                double grho = std::isnan(f_grho) ? 1.0 - 1e-5 : f_grho;
                double gsigma = std::isnan(f_gsigma) ? 1.0 + 1e-5 : f_gsigma;
                SweepResult r = distance_size_scaling(grho, gsigma, f_sizes, go.quad_tol,
                                                      go.parallelism, &store);
                write_sweep(out, go,
                            {fstr("mode", "d2"), fnum("g_rho", grho), fnum("g_sigma", gsigma),
                             fnum("quad_tol", go.quad_tol)},
                            "L", "d_squared", r.points, r.fit, r.offset);
                return 0;
            }
            if (f_mode == "subleading") {
                int L = f_L > 0 ? f_L : 700;
                double gmin = std::isnan(f_gmin) ? 0.02 : f_gmin;
                double gmax = std::isnan(f_gmax) ? 0.2 : f_gmax;
                std::vector<double> grid = log_grid(gmin, gmax, f_gpts);
                for (double& g : grid) g = 1.0 + g;
                SweepResult r = subleading_exponent(grid, L, go.quad_tol, go.parallelism,
                                                    f_margin, &store);
                write_sweep(out, go,
                            {fstr("mode", "subleading"), fint("L", L), fnum("margin", f_margin),
                             fnum("quad_tol", go.quad_tol)},
                            "g_tilde", "y", r.points, r.fit, r.offset);
                return 0;
            }
            int L = f_L > 0 ? f_L : 500;
            double gsigma = std::isnan(f_gsigma) ? 10.0 : f_gsigma;
            double gmin = std::isnan(f_gmin) ? 3e-3 : f_gmin;
            double gmax = std::isnan(f_gmax) ? 3e-2 : f_gmax;
            std::vector<double> grid = log_grid(gmin, gmax, f_gpts);
            for (double& g : grid) g = 1.0 - g;
            SweepResult r = leading_exponent(grid, gsigma, L, go.quad_tol, go.parallelism, &store);
            write_sweep(out, go,
                        {fstr("mode", "leading"), fnum("g_sigma", gsigma), fint("L", L),
                         fnum("quad_tol", go.quad_tol)},
                        "minus_g_tilde_rho", "d2_over_l2", r.points, r.fit, r.offset);
            return 0;
        }

        // reproduce
        TableStore store(go.cache_dir);
        if (f1->parsed()) {
            if (r1_rhos.empty()) throw std::invalid_argument("--g-rho-set must be non-empty");
            for (double g : r1_rhos)
                if (!(g >= 0.0)) throw std::invalid_argument("--g-rho-set entries must be >= 0");
            std::vector<double> sigmas(static_cast<size_t>(r1_pts));
            for (int i = 0; i < r1_pts; ++i)
                sigmas[static_cast<size_t>(i)] = 2.0 * i / (r1_pts - 1);
            std::set<double> distinct(r1_rhos.begin(), r1_rhos.end());
            distinct.insert(sigmas.begin(), sigmas.end());
            std::vector<double> gs(distinct.begin(), distinct.end());
            std::vector<GroundStateObservables> obs(gs.size());
            parallel_for(static_cast<int>(gs.size()), go.parallelism, [&](int i) {
                obs[static_cast<size_t>(i)] =
                    cached_moments(&store, gs[static_cast<size_t>(i)], r1_L, cfg);
            });
            std::map<double, const GroundStateObservables*> by_g;
            for (size_t i = 0; i < gs.size(); ++i) by_g[gs[i]] = &obs[i];
            std::vector<std::vector<double>> rows;
            rows.reserve(r1_rhos.size() * sigmas.size());
            for (double grho : r1_rhos)
                for (double gsigma : sigmas) {
                    DistanceResult d = distance_squared(*by_g.at(grho), *by_g.at(gsigma));
                    rows.push_back(
                        {grho, gsigma, d.d_squared / (static_cast<double>(r1_L) * r1_L)});
                }
            write_grid(out, go,
                       {fstr("figure", "fig1"), fint("L", r1_L), fnum("quad_tol", go.quad_tol)},
                       {"g_rho", "g_sigma", "d2_over_l2"}, rows);
            return 0;
        }
        if (f2a->parsed()) {
            SweepResult r = qfi_size_scaling(r2a_sizes, go.quad_tol, go.parallelism, &store);
            write_sweep(out, go, {fstr("figure", "fig2a"), fnum("quad_tol", go.quad_tol)}, "L",
                        "qfi", r.points, r.fit, r.offset);
            return 0;
        }
        if (f2b->parsed()) {
            if (!(r2b_gt < 1.0)) throw std::invalid_argument("--g-tilde must be < 1");
            SweepResult r = distance_size_scaling(1.0 - r2b_gt, 1.0 + r2b_gt, r2b_sizes,
                                                  go.quad_tol, go.parallelism, &store);
            write_sweep(out, go,
                        {fstr("figure", "fig2b"), fnum("g_tilde", r2b_gt),
                         fnum("quad_tol", go.quad_tol)},
                        "L", "d_squared", r.points, r.fit, r.offset);
            return 0;
        }
        if (f3a->parsed()) {
            std::vector<double> grid = log_grid(r3a_gmin, r3a_gmax, r3a_pts);
            for (double& g : grid) g = 1.0 + g;
            SweepResult r = subleading_exponent(grid, r3a_L, go.quad_tol, go.parallelism,
                                                r3a_margin, &store);
            write_sweep(out, go,
                        {fstr("figure", "fig3a"), fint("L", r3a_L), fnum("margin", r3a_margin),
                         fnum("quad_tol", go.quad_tol)},
                        "g_tilde", "y", r.points, r.fit, r.offset);
            return 0;
        }
        if (f3b->parsed()) {
            std::vector<double> grid = log_grid(r3b_gmin, r3b_gmax, r3b_pts);
            for (double& g : grid) g = 1.0 - g;
            SweepResult r =
                leading_exponent(grid, r3b_gsigma, r3b_L, go.quad_tol, go.parallelism, &store);
            write_sweep(out, go,
                        {fstr("figure", "fig3b"), fnum("g_sigma", r3b_gsigma), fint("L", r3b_L),
                         fnum("quad_tol", go.quad_tol)},
                        "minus_g_tilde_rho", "d2_over_l2", r.points, r.fit, r.offset);
            return 0;
        }
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace wdt
