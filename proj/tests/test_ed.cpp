#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "wdt/ed.hpp"
#include "wdt/errors.hpp"
#include "wdt/tfim.hpp"

using namespace wdt;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double rayleigh(int L, double g, const std::vector<double>& v) {
    std::vector<double> hv(v.size());
    detail::apply_hamiltonian(L, g, v, hv);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        num += v[i] * hv[i];
        den += v[i] * v[i];
    }
    return num / den;
}

// Open two-site chain H = -sx sx - g (sz_0 + sz_1): ground-state
// <sx sx> = 1 / sqrt(1 + 4 g^2), the L = 2 anchor (the periodic ring
// double-counts its single bond, so it cannot be used here).
double open_two_site_xx(double g) {
    // basis |00>,|01>,|10>,|11> (bit = spin down along z); H in this basis:
    //   diag(-2g, 0, 0, 2g), off-diagonal -1 between |00>|11> and |01>|10>.
    // Ground state lives in the {|00>,|11>} block: [[-2g,-1],[-1,2g]].
    double e = -std::sqrt(1.0 + 4.0 * g * g);
    // eigenvector (a, b): (-2g - e) a = b * 1 ... <sx sx> = 2ab/(a^2+b^2)
    double a = 1.0, b = -(e + 2.0 * g);
    return 2.0 * a * b / (a * a + b * b);
}

}  // namespace

TEST_CASE("two-site closed form") {
    for (double g : {0.0, 0.3, 1.0, 2.5, 10.0})
        CHECK(open_two_site_xx(g) == doctest::Approx(1.0 / std::sqrt(1.0 + 4.0 * g * g))
                                          .epsilon(1e-12));
    CHECK(open_two_site_xx(1.0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("classical limit g = 0") {
    for (int L : {2, 5, 10}) {
        EDSolution sol = ground_state(L, 0.0);
        CHECK(sol.energy == doctest::Approx(-static_cast<double>(L)).epsilon(1e-12));
        CHECK(sol.degenerate);
        auto [mx, mx2] = ed_mx_moments(sol);
        CHECK(mx == doctest::Approx(static_cast<double>(L)).epsilon(1e-10));
        CHECK(mx2 == doctest::Approx(static_cast<double>(L) * L).epsilon(1e-10));
        for (int n = 1; n <= L / 2; ++n)
            CHECK(ed_xx_correlator(sol, n) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("polarized limit g = 1e6") {
    EDSolution sol = ground_state(8, 1e6);
    CHECK_FALSE(sol.degenerate);
    CHECK(std::abs(ed_xx_correlator(sol, 1)) < 1e-6);
    auto [mx, mx2] = ed_mx_moments(sol);
    CHECK(std::abs(mx) < 1e-6);
    // <Mx^2> - L = 2 L C(1) ~ L/(2g): 8e-6 here, an exact physical offset,
    // so the tolerance sits just above it.
    CHECK(std::abs(mx2 - 8.0) < 1e-5);
}

TEST_CASE("state vector integrity") {
    for (double g : {0.4, 1.0, 3.0}) {
        EDSolution sol = ground_state(9, g);
        CHECK(static_cast<int>(sol.amplitudes.size()) == 1 << 9);
        double norm = 0.0;
        for (double a : sol.amplitudes) norm += a * a;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.energy == doctest::Approx(rayleigh(9, g, sol.amplitudes)).epsilon(1e-12));
    }
}

TEST_CASE("ground energy under-runs random Rayleigh quotients") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double g : {0.5, 1.0, 2.0}) {
        EDSolution sol = ground_state(8, g);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> v(1 << 8);
            for (double& x : v) x = gauss(rng);
            CHECK(sol.energy <= rayleigh(8, g, v) + 1e-12);
        }
    }
}

TEST_CASE("translation invariance of raw two-point functions") {
    EDSolution sol = ground_state(10, 1.3);
    const auto& psi = sol.amplitudes;
    for (int n : {1, 3, 5}) {
        double first = 0.0;
        for (int i = 0; i < 10; ++i) {
            int mask = (1 << i) | (1 << ((i + n) % 10));
            double v = 0.0;
            for (size_t s = 0; s < psi.size(); ++s)
                v += psi[s] * psi[s ^ static_cast<size_t>(mask)];
            if (i == 0)
                first = v;
            else
                CHECK(std::abs(v - first) < 1e-10);
        }
    }
}

TEST_CASE("reflection symmetry C(n) = C(L - n)") {
    EDSolution sol = ground_state(12, 0.7);
    const auto& psi = sol.amplitudes;
    auto corr = [&](int n) {
        int mask = 1 | (1 << (n % 12));
        double v = 0.0;
        for (size_t s = 0; s < psi.size(); ++s)
            v += psi[s] * psi[s ^ static_cast<size_t>(mask)];
        return v;
    };
    for (int n : {1, 2, 3, 4, 5}) CHECK(corr(n) == doctest::Approx(corr(12 - n)).epsilon(1e-10));
}

TEST_CASE("per-site energy decreases with L at fixed g") {
    double prev = 1e300;
    for (int L : {4, 6, 8, 10, 12}) {
        EDSolution sol = ground_state(L, 1.0);
        CHECK(sol.energy < prev + 1e-12);
        prev = sol.energy;
    }
}

TEST_CASE("critical-point correlator is near the infinite-chain anchor") {
    EDSolution sol = ground_state(12, 1.0);
    CHECK(std::abs(ed_xx_correlator(sol, 1) - 2.0 / kPi) < 0.02);
}

TEST_CASE("Lanczos sizes agree with the dense-solver trend") {
    // Dense path tops out at L = 12; L = 13, 14 use the iterative solver.
    // Per-site energies must keep converging smoothly toward -4/pi.
    double e12 = ground_state(12, 1.0).energy / 12.0;
    double e13 = ground_state(13, 1.0).energy / 13.0;
    double e14 = ground_state(14, 1.0).energy / 14.0;
    double einf = -4.0 / kPi;
    CHECK(std::abs(e13 - einf) < std::abs(e12 - einf));
    CHECK(std::abs(e14 - einf) < std::abs(e13 - einf));
    CHECK(e14 == doctest::Approx(einf).epsilon(2e-3));

    EDSolution s13 = ground_state(13, 2.0);
    double c1_13 = ed_xx_correlator(s13, 1);
    double c1_inf = correlator_table(2.0, 1).at(1);
    CHECK(std::abs(c1_13 - c1_inf) < 1e-3);
}

TEST_CASE("degenerate-pair handling in the ordered phase") {
    // Pair splitting scales like g^L: 0.05^10 is far below the 1e-10
    // threshold, 0.5^10 is far above it.
    EDSolution sol = ground_state(10, 0.05);
    CHECK(sol.degenerate);
    auto [mx, mx2] = ed_mx_moments(sol);
    CHECK(mx >= 0.0);
    CHECK(mx > 1.0);  // symmetry-broken combination carries extensive <Mx>
    CHECK(mx2 >= mx * mx - 1e-9);

    EDSolution split = ground_state(10, 0.5);
    CHECK_FALSE(split.degenerate);
    CHECK(ed_mx_moments(split).first == 0.0);  // definite parity
    CHECK_FALSE(ground_state(10, 1.5).degenerate);
}

TEST_CASE("cross-module moment consistency at L = 10, g = 2") {
    EDSolution sol = ground_state(10, 2.0);
    auto [mx, mx2] = ed_mx_moments(sol);
    CHECK(std::abs(mx) < 1e-10);
    // Infinite-chain comparison value 1 + 2 sum_n C(n), summed to convergence.
    CorrelatorTable t = correlator_table(2.0, 64);
    double s = 1.0;
    for (int n = 1; n <= 64; ++n) s += 2.0 * t.at(n);
    CHECK(std::abs(mx2 / 10.0 - s) < 1e-2);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(ground_state(15, 1.0), DimensionTooLarge);
    CHECK_THROWS_AS(ground_state(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ground_state(5, -0.5), std::invalid_argument);
    EDSolution sol = ground_state(6, 1.0);
    CHECK_THROWS_AS(ed_xx_correlator(sol, 0), std::invalid_argument);
    CHECK_THROWS_AS(ed_xx_correlator(sol, 4), std::invalid_argument);
}
