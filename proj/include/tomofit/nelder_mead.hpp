#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>

#include "tomofit/errors.hpp"

namespace tomofit {

struct NelderMeadOptions {
    int max_iterations = 2000;  // total budget across restarts
    double f_tol = 1e-12;       // simplex function-value spread
    double x_tol = 1e-10;       // simplex vertex spread
    int restarts = 1;           // extra polish passes around the incumbent
};

template <std::size_t N>
struct NelderMeadResult {
    std::array<double, N> x{};
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * Deterministic Nelder-Mead simplex minimizer.
 *
 * Standard coefficients (reflection 1, expansion 2, contraction 0.5, shrink
 * 0.5); the initial simplex is the start point plus per-coordinate steps of
 * max(0.05, 0.05*|x0_i|). No randomness anywhere, so a given input always
 * produces the same output. Convergence means the function-value spread fell
 * below f_tol or the vertex spread below x_tol; after each converged pass the
 * simplex is rebuilt around the incumbent and polished again, `restarts`
 * times, within the shared iteration budget.
 *
 * A non-finite cost value anywhere aborts the search with the offending
 * point attached.
 */
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& cost, const std::array<double, N>& x0,
                                const NelderMeadOptions& opt = {}) {
    using Point = std::array<double, N>;

    auto eval = [&cost](const Point& p) {
        const double v = cost(p);
        if (!std::isfinite(v))
            throw optimizer_abort("nelder_mead: cost is not finite",
                                  std::vector<double>(p.begin(), p.end()));
        return v;
    };

    std::array<Point, N + 1> verts{};
    std::array<double, N + 1> vals{};

    auto init_simplex = [&](const Point& center) {
        verts[0] = center;
        for (std::size_t i = 0; i < N; ++i) {
            verts[i + 1] = center;
            verts[i + 1][i] += std::max(0.05, 0.05 * std::abs(center[i]));
        }
        for (std::size_t v = 0; v <= N; ++v) vals[v] = eval(verts[v]);
    };

    auto order = [&] {
        std::array<std::size_t, N + 1> idx{};
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::array<Point, N + 1> pv{};
        std::array<double, N + 1> pf{};
        for (std::size_t k = 0; k <= N; ++k) {
            pv[k] = verts[idx[k]];
            pf[k] = vals[idx[k]];
        }
        verts = pv;
        vals = pf;
    };

    auto affine = [](const Point& from, const Point& to, double c) {
        Point p{};
        for (std::size_t i = 0; i < N; ++i) p[i] = from[i] + c * (to[i] - from[i]);
        return p;
    };

    int iterations = 0;
    bool converged = false;

    for (int pass = 0; pass <= std::max(0, opt.restarts); ++pass) {
        init_simplex(pass == 0 ? x0 : verts[0]);
        converged = false;
        while (true) {
            order();
            const double f_spread = vals[N] - vals[0];
            double x_spread = 0.0;
            for (std::size_t v = 1; v <= N; ++v)
                for (std::size_t i = 0; i < N; ++i)
                    x_spread = std::max(x_spread, std::abs(verts[v][i] - verts[0][i]));
            if (f_spread < opt.f_tol || x_spread < opt.x_tol) {
                converged = true;
                break;
            }
            if (iterations >= opt.max_iterations) break;
            ++iterations;

            Point centroid{};  // of every vertex but the worst
            for (std::size_t v = 0; v < N; ++v)
                for (std::size_t i = 0; i < N; ++i) centroid[i] += verts[v][i];
            for (double& c : centroid) c /= static_cast<double>(N);

            const Point reflected = affine(centroid, verts[N], -1.0);
            const double f_reflected = eval(reflected);
            if (f_reflected < vals[0]) {
                const Point expanded = affine(centroid, reflected, 2.0);
                const double f_expanded = eval(expanded);
                if (f_expanded < f_reflected) {
                    verts[N] = expanded;
                    vals[N] = f_expanded;
                } else {
                    verts[N] = reflected;
                    vals[N] = f_reflected;
                }
            } else if (f_reflected < vals[N - 1]) {
                verts[N] = reflected;
                vals[N] = f_reflected;
            } else {
                const bool outside = f_reflected < vals[N];
                const Point contracted =
                    outside ? affine(centroid, reflected, 0.5) : affine(centroid, verts[N], 0.5);
                const double f_contracted = eval(contracted);
                if (f_contracted < (outside ? f_reflected : vals[N])) {
                    verts[N] = contracted;
                    vals[N] = f_contracted;
                } else {
                    // Shrink toward the best vertex, which is never discarded.
                    for (std::size_t v = 1; v <= N; ++v) {
                        verts[v] = affine(verts[0], verts[v], 0.5);
                        vals[v] = eval(verts[v]);
                    }
                }
            }
        }
        if (iterations >= opt.max_iterations) break;
    }

    order();
    return {verts[0], vals[0], iterations, converged};
}

}  // namespace tomofit
