#pragma once

#include <algorithm>
#include <cmath>

#include "tomofit/density.hpp"
#include "tomofit/errors.hpp"
#include "tomofit/stokes.hpp"

namespace tomofit {

/**
 * Parameters of the lower-triangular T-matrix
 *
 *     T = [ t1        0  ]
 *         [ t3 + i t4 t2 ]
 *
 * whose normalized Gram form T^dag T / Tr(T^dag T) is a density matrix for
 * every non-zero parameter vector. This is the search space of the
 * maximum-likelihood fit: any candidate the optimizer visits is physical by
 * construction, so no penalty terms are needed.
 */
struct TParams {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double t4 = 0.0;

    double norm2() const { return t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4; }
    bool is_finite() const {
        return std::isfinite(t1) && std::isfinite(t2) && std::isfinite(t3) && std::isfinite(t4);
    }
};

enum class SeedBranch { generic, near_zero_state };

/// Outcome of the analytic seeding: the starting parameters, whether the
/// square-root numerator had to be clamped to zero (which happens exactly
/// when the measured vector lies outside the Bloch ball), and which branch
/// produced them.
struct SeedReport {
    TParams t;
    bool clamped = false;
    SeedBranch branch = SeedBranch::generic;
    StokesVector s_in;
};

/// rho = T^dag T / Tr(T^dag T). Trace 1 and nonnegative eigenvalues hold for
/// any finite non-zero t; the density is invariant under scaling t -> c*t.
inline DensityMatrix density_from_t(const TParams& t) {
    if (!t.is_finite()) throw invalid_input("density_from_t: non-finite parameters");
    const double q = t.norm2();
    if (q <= 0.0) throw degenerate_parameters("density_from_t: all parameters are zero");
    const double top = t.t1 * t.t1 + t.t3 * t.t3 + t.t4 * t.t4;
    DensityMatrix rho;
    rho.r00 = top / q;
    rho.r11 = t.t2 * t.t2 / q;
    rho.r01_re = t.t2 * t.t3 / q;
    rho.r01_im = -t.t2 * t.t4 / q;
    return rho;
}

/// T parameters of the pure state cos(theta/2)|0> + sin(theta/2)e^{i phi}|1>,
/// scaled by `amplitude`. t1 = 0 characterizes arbitrary pure states.
inline TParams t_from_pure_angles(double theta, double phi, double amplitude = 1.0) {
    if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(amplitude) ||
        amplitude <= 0.0)
        throw invalid_input("t_from_pure_angles: amplitude must be finite and positive");
    const double half = theta / 2.0;
    return {0.0, amplitude * std::sin(half), amplitude * std::cos(half) * std::cos(phi),
            amplitude * std::cos(half) * std::sin(phi)};
}

/**
 * Analytic starting values for the maximum-likelihood search, computed from
 * the measured Stokes vector.
 *
 * Generic branch (t2 pinned to 1, removing the scale gauge freedom):
 *
 *     t3 = s1 / (1 - s3)
 *     t4 = s2 / (1 - s3)
 *     t1 = sqrt(max(0, 1 - s1^2 - s2^2 - s3^2)) / (1 - s3)
 *
 * The numerator under the square root is negative exactly when the data
 * violate the physicality gate; it is then clamped to zero and the report
 * says so. For physical inputs the seed is an exact preimage of s, not an
 * approximation.
 *
 * Near-|0> branch, taken when s3 >= 1 - epsilon (which also absorbs the
 * unphysical s3 > 1 case and keeps the generic denominator away from zero):
 * t2 = 0 forces the |0><0| matrix, and the free parameters are set to 1.
 */
inline SeedReport seed_from_stokes(const StokesVector& s, double epsilon = 0.1) {
    if (!s.is_finite()) throw invalid_input("seed_from_stokes: non-finite Stokes vector");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw invalid_input("seed_from_stokes: epsilon must lie in [0, 1)");
    if (s.s3 >= 1.0 - epsilon)
        return {TParams{1.0, 0.0, 1.0, 1.0}, false, SeedBranch::near_zero_state, s};
    const double denom = 1.0 - s.s3;  // > 0 on this branch
    const double num = 1.0 - s.s3 * s.s3 - s.s1 * s.s1 - s.s2 * s.s2;
    SeedReport report;
    report.clamped = num < 0.0;
    report.t = {std::sqrt(std::max(0.0, num)) / denom, 1.0, s.s1 / denom, s.s2 / denom};
    report.branch = SeedBranch::generic;
    report.s_in = s;
    return report;
}

/// Inverts the seeding relation to express t2 through t1 for a strictly
/// mixed state: t2 = |1 - s3| |t1| / sqrt(1 - s1^2 - s2^2 - s3^2). As the
/// state approaches the sphere the denominator vanishes; callers should
/// switch to the seeding branches instead.
inline double t2_from_t1(const StokesVector& s, double t1) {
    if (!s.is_finite() || !std::isfinite(t1))
        throw invalid_input("t2_from_t1: non-finite input");
    const double denom = 1.0 - s.s3 * s.s3 - s.s1 * s.s1 - s.s2 * s.s2;
    if (denom <= 0.0)
        throw pure_state_limit("t2_from_t1: state is not strictly mixed");
    return std::abs(1.0 - s.s3) * std::abs(t1) / std::sqrt(denom);
}

}  // namespace tomofit
