#include "wdt/ed.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "wdt/errors.hpp"

namespace wdt {

namespace {

std::vector<uint32_t> bond_masks(int L) {
    std::vector<uint32_t> masks;
    masks.reserve(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j)
        masks.push_back((1u << j) | (1u << ((j + 1) % L)));
    return masks;
}

void apply_mx(int L, const std::vector<double>& x, std::vector<double>& y) {
    size_t dim = size_t{1} << L;
    y.assign(dim, 0.0);
    for (size_t s = 0; s < dim; ++s) {
        double acc = 0.0;
        for (int j = 0; j < L; ++j) acc += x[s ^ (size_t{1} << j)];
        y[s] = acc;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

struct SectorStates {
    std::vector<uint32_t> states;         // full-space indices in this parity sector
    std::vector<lapack_int> rank;         // full index -> sector position
};

SectorStates sector_states(int L, int parity) {
    size_t dim = size_t{1} << L;
    SectorStates s;
    s.rank.assign(dim, -1);
    s.states.reserve(dim / 2);
    for (uint32_t i = 0; i < dim; ++i) {
        if ((std::popcount(i) & 1) == parity) {
            s.rank[i] = static_cast<lapack_int>(s.states.size());
            s.states.push_back(i);
        }
    }
    return s;
}

// Up to two lowest eigenpairs of one parity sector, vectors in the full space.
struct SectorLowest {
    double e[2];
    std::vector<double> v[2];
    int count = 0;
};

SectorLowest dense_sector_lowest(int L, double g, int parity) {
    SectorStates sec = sector_states(L, parity);
    lapack_int dim = static_cast<lapack_int>(sec.states.size());
    std::vector<uint32_t> masks = bond_masks(L);

    std::vector<double> a(static_cast<size_t>(dim) * dim, 0.0);
    for (lapack_int i = 0; i < dim; ++i) {
        uint32_t s = sec.states[static_cast<size_t>(i)];
        a[static_cast<size_t>(i) * dim + i] = -g * (L - 2 * std::popcount(s));
        for (uint32_t mask : masks) {
            lapack_int r = sec.rank[s ^ mask];
            a[static_cast<size_t>(i) * dim + r] -= 1.0;  // col-major; symmetric fill
        }
    }

    lapack_int found = 0;
    lapack_int nev = dim < 2 ? 1 : 2;
    std::vector<double> w(static_cast<size_t>(nev));
    std::vector<double> z(static_cast<size_t>(dim) * nev);
    std::vector<lapack_int> isuppz(2 * static_cast<size_t>(nev));
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', dim, a.data(), dim, 0.0,
                                     0.0, 1, nev, 0.0, &found, w.data(), z.data(), dim,
                                     isuppz.data());
    if (info != 0)
        throw std::runtime_error("dsyevr failed with info " + std::to_string(info));

    SectorLowest out;
    out.count = static_cast<int>(found);
    for (int k = 0; k < out.count; ++k) {
        out.e[k] = w[static_cast<size_t>(k)];
        out.v[k].assign(size_t{1} << L, 0.0);
        for (lapack_int i = 0; i < dim; ++i)
            out.v[k][sec.states[static_cast<size_t>(i)]] = z[static_cast<size_t>(k) * dim + i];
    }
    return out;
}

void project_parity(int parity, std::vector<double>& x) {
    for (size_t s = 0; s < x.size(); ++s)
        if ((std::popcount(static_cast<uint32_t>(s)) & 1) != parity) x[s] = 0.0;
}

void normalize(std::vector<double>& x) {
    double nrm = std::sqrt(dot(x, x));
    if (nrm == 0.0) throw std::runtime_error("lanczos: zero vector");
    for (double& v : x) v /= nrm;
}

// Parity-projected Lanczos with full reorthogonalization on the 2^L space.
SectorLowest lanczos_sector_lowest(int L, double g, int parity) {
    size_t dim = size_t{1} << L;
    const int max_iter = 400;
    const double residual_tol = 1e-12;

    std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (static_cast<uint64_t>(L) << 8) ^
                        static_cast<uint64_t>(parity));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    std::vector<double> v(dim);
    for (double& x : v) x = u(rng);
    project_parity(parity, v);
    normalize(v);
    basis.push_back(v);

    std::vector<double> hv(dim);
    std::vector<double> ritz_val(2, 0.0);
    std::vector<double> ritz_vec;
    int converged = 0;

    for (int m = 0; m < max_iter; ++m) {
        detail::apply_hamiltonian(L, g, basis.back(), hv);
        project_parity(parity, hv);
        double a = dot(basis.back(), hv);
        alpha.push_back(a);
        for (size_t i = 0; i < dim; ++i) hv[i] -= a * basis.back()[i];
        if (m > 0)
            for (size_t i = 0; i < dim; ++i) hv[i] -= beta.back() * basis[basis.size() - 2][i];
        for (const auto& q : basis) {  // full reorthogonalization
            double c = dot(q, hv);
            for (size_t i = 0; i < dim; ++i) hv[i] -= c * q[i];
        }
        double b = std::sqrt(dot(hv, hv));

        int k = static_cast<int>(alpha.size());
        bool check_now = b < 1e-13 || k >= max_iter || (k >= 2 && k % 5 == 0);
        if (check_now) {
            lapack_int n = k;
            std::vector<double> d(alpha);
            std::vector<double> e(beta);
            e.resize(static_cast<size_t>(n), 0.0);
            lapack_int nev = n < 2 ? 1 : 2;
            lapack_int found = 0;
            std::vector<double> wv(static_cast<size_t>(nev));
            std::vector<double> zv(static_cast<size_t>(n) * nev);
            std::vector<lapack_int> isuppz(2 * static_cast<size_t>(nev));
            lapack_int info =
                LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                               nev, 0.0, &found, wv.data(), zv.data(), n, isuppz.data());
            if (info != 0)
                throw std::runtime_error("dstevr failed with info " + std::to_string(info));
            converged = 0;
            for (int q = 0; q < static_cast<int>(found); ++q) {
                double res = b * std::abs(zv[static_cast<size_t>(q) * n + (n - 1)]);
                if (res < residual_tol * std::max(1.0, std::abs(wv[static_cast<size_t>(q)])))
                    ++converged;
            }
            if (converged == static_cast<int>(found) || b < 1e-13 || k >= max_iter) {
                ritz_val.assign(wv.begin(), wv.begin() + found);
                ritz_vec.assign(zv.begin(), zv.begin() + static_cast<size_t>(n) * found);
                if (converged != static_cast<int>(found) && b >= 1e-13)
                    throw NonConvergence("lanczos: residual above " +
                                         std::to_string(residual_tol) + " after " +
                                         std::to_string(k) + " iterations (L = " +
                                         std::to_string(L) + ", g = " + std::to_string(g) + ")");
                SectorLowest out;
                out.count = static_cast<int>(ritz_val.size());
                for (int q = 0; q < out.count; ++q) {
                    out.e[q] = ritz_val[static_cast<size_t>(q)];
                    out.v[q].assign(dim, 0.0);
                    for (int j = 0; j < k; ++j) {
                        double c = ritz_vec[static_cast<size_t>(q) * k + j];
                        const auto& col = basis[static_cast<size_t>(j)];
                        for (size_t i = 0; i < dim; ++i) out.v[q][i] += c * col[i];
                    }
                    normalize(out.v[q]);
                }
                return out;
            }
        }
        beta.push_back(b);
        for (size_t i = 0; i < dim; ++i) hv[i] /= b;
        basis.push_back(hv);
    }
    throw NonConvergence("lanczos: iteration limit reached");
}

}  // namespace

namespace detail {

void apply_hamiltonian(int L, double g, const std::vector<double>& x, std::vector<double>& y) {
    size_t dim = size_t{1} << L;
    std::vector<uint32_t> masks = bond_masks(L);
    y.assign(dim, 0.0);
    for (size_t s = 0; s < dim; ++s) {
        double acc = -g * (L - 2 * std::popcount(static_cast<uint32_t>(s))) * x[s];
        for (uint32_t mask : masks) acc -= x[s ^ mask];
        y[s] = acc;
    }
}

}  // namespace detail

EDSolution ground_state(int L, double g) {
    if (L > 14) throw DimensionTooLarge("ground_state: L must be <= 14, got " + std::to_string(L));
    if (L < 2) throw std::invalid_argument("ground_state: L must be >= 2");
    if (g < 0.0) throw std::invalid_argument("ground_state: g must be >= 0");

    SectorLowest even = L <= 12 ? dense_sector_lowest(L, g, 0) : lanczos_sector_lowest(L, g, 0);
    SectorLowest odd = L <= 12 ? dense_sector_lowest(L, g, 1) : lanczos_sector_lowest(L, g, 1);

    struct Cand { double e; const std::vector<double>* v; };
    std::vector<Cand> cands;
    for (int k = 0; k < even.count; ++k) cands.push_back({even.e[k], &even.v[k]});
    for (int k = 0; k < odd.count; ++k) cands.push_back({odd.e[k], &odd.v[k]});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.e < b.e; });

    EDSolution sol;
    sol.L = L;
    sol.g = g;
    sol.energy = cands[0].e;
    sol.degenerate = cands.size() > 1 && (cands[1].e - cands[0].e) < 1e-10;

    if (!sol.degenerate) {
        sol.amplitudes = *cands[0].v;
        return sol;
    }

    // Quasi-degenerate pair: take the combination in the two-dimensional
    // ground space with maximal <Mx>, the broken-symmetry representative.
    const std::vector<double>& v0 = *cands[0].v;
    const std::vector<double>& v1 = *cands[1].v;
    std::vector<double> y0, y1;
    apply_mx(L, v0, y0);
    apply_mx(L, v1, y1);
    double m00 = dot(v0, y0), m01 = dot(v1, y0), m11 = dot(v1, y1);
    double mid = 0.5 * (m00 + m11);
    double rad = std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + m01 * m01);
    double lam = mid + rad;
    double a, b;
    if (std::abs(m01) > 1e-14) {
        a = m01;
        b = lam - m00;
    } else {
        a = m00 >= m11 ? 1.0 : 0.0;
        b = 1.0 - a;
    }
    double nrm = std::sqrt(a * a + b * b);
    a /= nrm;
    b /= nrm;
    sol.amplitudes.assign(v0.size(), 0.0);
    for (size_t i = 0; i < v0.size(); ++i) sol.amplitudes[i] = a * v0[i] + b * v1[i];
    normalize(sol.amplitudes);
    return sol;
}

double ed_xx_correlator(const EDSolution& sol, int n) {
    if (n < 1 || n > sol.L / 2)
        throw std::invalid_argument("ed_xx_correlator: need 1 <= n <= L/2");
    size_t dim = size_t{1} << sol.L;
    double acc = 0.0;
    for (int i = 0; i < sol.L; ++i) {
        uint32_t mask = (1u << i) | (1u << ((i + n) % sol.L));
        double c = 0.0;
        for (size_t s = 0; s < dim; ++s) c += sol.amplitudes[s] * sol.amplitudes[s ^ mask];
        acc += c;
    }
    return acc / sol.L;
}

std::pair<double, double> ed_mx_moments(const EDSolution& sol) {
    std::vector<double> y;
    apply_mx(sol.L, sol.amplitudes, y);
    double mean = dot(sol.amplitudes, y);
    double second = dot(y, y);
    return {mean, second};
}

}  // namespace wdt
