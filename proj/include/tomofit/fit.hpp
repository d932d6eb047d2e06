#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "tomofit/density.hpp"
#include "tomofit/errors.hpp"
#include "tomofit/nelder_mead.hpp"
#include "tomofit/projection.hpp"
#include "tomofit/records.hpp"
#include "tomofit/stokes.hpp"
#include "tomofit/tmatrix.hpp"

namespace tomofit {

enum class CostKind { stokes_lsq, count_likelihood };

struct FitOptions {
    CostKind cost_kind = CostKind::stokes_lsq;
    int max_iterations = 2000;
    double f_tol = 1e-12;
    double x_tol = 1e-10;
    int restarts = 1;
};

enum class FitMethod { exact_passthrough, mle, projection };

/// Result of the reconstruction pipeline. `t` and `seed` are set only when
/// the optimizer actually ran; in that case rho = density_from_t(t). For
/// exact_passthrough the measured matrix itself is the solution and cost is
/// zero by definition.
struct FitResult {
    std::optional<TParams> t;
    DensityMatrix rho;
    double cost = 0.0;
    int iterations = 0;
    bool converged = true;
    FitMethod method = FitMethod::exact_passthrough;
    std::optional<SeedReport> seed;
};

/// Sum of squared Stokes residuals between the parametrized state and the
/// measurement. Zero exactly when the T-matrix reproduces the data.
inline double cost_stokes_lsq(const TParams& t, const StokesVector& s_meas) {
    const StokesVector s = stokes_from_density(density_from_t(t));
    const double d1 = s.s1 - s_meas.s1;
    const double d2 = s.s2 - s_meas.s2;
    const double d3 = s.s3 - s_meas.s3;
    return d1 * d1 + d2 * d2 + d3 * d3;
}

/// Variance-weighted squared count residuals over the h/d/r measurements:
/// the Gaussian approximation to the Poisson count likelihood. The max(.,1)
/// floor keeps the weight finite where a predicted count vanishes.
inline double cost_count_likelihood(const TParams& t, const CountRecord& rec) {
    const double n = rec.n_h + rec.n_v;
    const StokesVector s = stokes_from_density(density_from_t(t));
    auto term = [n](double probability, double observed) {
        const double predicted = n * probability;
        const double r = predicted - observed;
        return r * r / std::max(predicted, 1.0);
    };
    return term((1.0 + s.s3) / 2.0, rec.n_h) + term((1.0 + s.s1) / 2.0, rec.n_d) +
           term((1.0 + s.s2) / 2.0, rec.n_r);
}

struct OptimizeOutcome {
    TParams t;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free minimization of an arbitrary cost over T parameters.
/// Deterministic for fixed inputs; never returns a point worse than x0.
template <class F>
OptimizeOutcome optimize(F&& cost, const TParams& x0, const FitOptions& opts = {}) {
    NelderMeadOptions nm;
    nm.max_iterations = opts.max_iterations;
    nm.f_tol = opts.f_tol;
    nm.x_tol = opts.x_tol;
    nm.restarts = opts.restarts;
    auto wrapped = [&cost](const std::array<double, 4>& x) {
        return cost(TParams{x[0], x[1], x[2], x[3]});
    };
    const auto r = nelder_mead<4>(wrapped, {x0.t1, x0.t2, x0.t3, x0.t4}, nm);
    return {TParams{r.x[0], r.x[1], r.x[2], r.x[3]}, r.cost, r.iterations, r.converged};
}

/// Runs the maximum-likelihood fit unconditionally, starting from the
/// analytic seed. The count-likelihood cost needs the raw four-count record.
inline FitResult fit_mle(const StokesVector& s_meas, const CountRecord* rec = nullptr,
                         const FitOptions& opts = {}, double epsilon = 0.1) {
    if (!s_meas.is_finite()) throw invalid_input("fit_mle: non-finite Stokes vector");
    const SeedReport seed = seed_from_stokes(s_meas, epsilon);
    OptimizeOutcome out;
    if (opts.cost_kind == CostKind::count_likelihood) {
        if (rec == nullptr)
            throw invalid_input("fit_mle: count_likelihood cost requires a four-count record");
        const CountRecord record = *rec;
        out = optimize([&record](const TParams& t) { return cost_count_likelihood(t, record); },
                       seed.t, opts);
    } else {
        out = optimize([&s_meas](const TParams& t) { return cost_stokes_lsq(t, s_meas); },
                       seed.t, opts);
    }
    FitResult result;
    result.t = out.t;
    result.rho = density_from_t(out.t);
    result.cost = out.cost;
    result.iterations = out.iterations;
    result.converged = out.converged;
    result.method = FitMethod::mle;
    result.seed = seed;
    return result;
}

/// The full dispatch: data passing the physicality gate are their own
/// solution (the fit would be redundant), everything else is repaired by the
/// seeded maximum-likelihood fit. The returned density is always physical.
inline FitResult fit(const StokesVector& s_meas, const CountRecord* rec = nullptr,
                     const FitOptions& opts = {}, double epsilon = 0.1,
                     double physical_tol = 0.0) {
    if (!s_meas.is_finite()) throw invalid_input("fit: non-finite Stokes vector");
    if (is_physical(s_meas, physical_tol)) {
        FitResult result;
        result.method = FitMethod::exact_passthrough;
        result.rho = density_from_stokes(s_meas);
        return result;
    }
    return fit_mle(s_meas, rec, opts, epsilon);
}

/// Fit-free alternative: radial projection onto the Bloch sphere. The cost
/// field reports the squared Stokes residual left by the projection.
inline FitResult fit_via_projection(const StokesVector& s_meas) {
    const StokesVector projected = project_to_bloch_ball(s_meas);
    FitResult result;
    result.method = FitMethod::projection;
    result.rho = physical_density_via_projection(s_meas);
    const double d1 = projected.s1 - s_meas.s1;
    const double d2 = projected.s2 - s_meas.s2;
    const double d3 = projected.s3 - s_meas.s3;
    result.cost = d1 * d1 + d2 * d2 + d3 * d3;
    return result;
}

}  // namespace tomofit
