#pragma once

// Independent reference computations used only by the tests. These stay
// deliberately naive (inversion counting, Leibniz sums, Riemann grids,
// finite differences) so they share no code path with the library.

#include <complex>
#include <span>
#include <vector>

#include "bohmlab/permutation.hpp"
#include "bohmlab/wavefunction.hpp"

namespace oracles {

/// Parity by brute-force inversion counting.
inline int parity_by_inversions(const bohmlab::Permutation& p) {
    int inversions = 0;
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            if (p(i) > p(j)) ++inversions;
    return inversions % 2 == 0 ? +1 : -1;
}

/// Determinant as the explicit signed Leibniz sum over S_n.
inline std::complex<double> leibniz_determinant(const std::vector<std::complex<double>>& m, int n) {
    std::complex<double> total(0.0);
    for (const auto& sigma : bohmlab::enumerate_elements(n)) {
        std::complex<double> term(1.0);
        for (int i = 0; i < n; ++i) term *= m[static_cast<std::size_t>(i) * n + sigma(i)];
        total += static_cast<double>(bohmlab::parity(sigma)) * term;
    }
    return total;
}

/// Permanent as the unsigned Leibniz sum.
inline std::complex<double> leibniz_permanent(const std::vector<std::complex<double>>& m, int n) {
    std::complex<double> total(0.0);
    for (const auto& sigma : bohmlab::enumerate_elements(n)) {
        std::complex<double> term(1.0);
        for (int i = 0; i < n; ++i) term *= m[static_cast<std::size_t>(i) * n + sigma(i)];
        total += term;
    }
    return total;
}

/// Central finite-difference gradient of psi.
inline std::vector<std::complex<double>> fd_gradient(const bohmlab::WaveFunction& psi,
                                                     std::span<const double> q, double t,
                                                     double step = 1e-5) {
    std::vector<double> work(q.begin(), q.end());
    std::vector<std::complex<double>> out(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double saved = work[k];
        work[k] = saved + step;
        const auto hi = psi.value(std::span<const double>(work), t);
        work[k] = saved - step;
        const auto lo = psi.value(std::span<const double>(work), t);
        work[k] = saved;
        out[k] = (hi - lo) / (2.0 * step);
    }
    return out;
}

/// Plain midpoint Riemann sum on a dense 2D grid.
template <typename F>
double riemann_2d(F&& f, double ax, double bx, double ay, double by, int nx, int ny) {
    const double hx = (bx - ax) / nx, hy = (by - ay) / ny;
    double s = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) s += f(ax + (i + 0.5) * hx, ay + (j + 0.5) * hy);
    return s * hx * hy;
}

template <typename F>
double riemann_1d(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

}  // namespace oracles
