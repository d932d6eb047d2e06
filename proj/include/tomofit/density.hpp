#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "tomofit/errors.hpp"
#include "tomofit/stokes.hpp"

namespace tomofit {

/**
 * 2x2 density matrix stored by its independent real degrees of freedom.
 *
 * rho01 = r01_re + i*r01_im and rho10 is its conjugate by construction, so
 * Hermiticity cannot be violated. r00 + r11 = 1 holds for every matrix the
 * library produces. `raw` marks matrices built directly from measurement data
 * that violates the physicality gate: those may have a negative eigenvalue
 * and exist so the repair pipeline can inspect them.
 */
struct DensityMatrix {
    double r00 = 1.0;
    double r11 = 0.0;
    double r01_re = 0.0;
    double r01_im = 0.0;
    bool raw = false;
};

inline double det(const DensityMatrix& rho) {
    return rho.r00 * rho.r11 - (rho.r01_re * rho.r01_re + rho.r01_im * rho.r01_im);
}

/// Bloch expansion: rho = (I + s1*sigma1 + s2*sigma2 + s3*sigma3) / 2.
/// The result is flagged `raw` when s lies outside the unit ball.
inline DensityMatrix density_from_stokes(const StokesVector& s) {
    if (!s.is_finite()) throw invalid_input("density_from_stokes: non-finite Stokes vector");
    DensityMatrix rho;
    rho.r00 = (1.0 + s.s3) / 2.0;
    rho.r11 = (1.0 - s.s3) / 2.0;
    rho.r01_re = s.s1 / 2.0;
    rho.r01_im = -s.s2 / 2.0;
    rho.raw = !is_physical(s);
    return rho;
}

/// Pauli expectation values s_i = Tr(rho sigma_i). Exact inverse of
/// density_from_stokes up to one rounding per component.
inline StokesVector stokes_from_density(const DensityMatrix& rho) {
    return {2.0 * rho.r01_re, -2.0 * rho.r01_im, rho.r00 - rho.r11};
}

/// Eigenvalues sorted descending. The pair sums to 1 exactly: the smaller
/// one is computed as 1 - hi, which is exact while hi stays in [1/2, 2].
inline std::pair<double, double> eigenvalues(const DensityMatrix& rho) {
    const double d = (rho.r00 - rho.r11) / 2.0;
    const double h = std::sqrt(d * d + rho.r01_re * rho.r01_re + rho.r01_im * rho.r01_im);
    const double hi = 0.5 + h;
    return {hi, 1.0 - hi};
}

/// Tr(rho^2); 1/2 for the completely mixed state, 1 for pure states.
inline double purity(const DensityMatrix& rho) {
    return rho.r00 * rho.r00 + rho.r11 * rho.r11
         + 2.0 * (rho.r01_re * rho.r01_re + rho.r01_im * rho.r01_im);
}

/// Single-qubit fidelity in closed form: Tr(rho sigma) + 2 sqrt(det rho det sigma).
/// Both inputs must be physical up to rounding; determinants that dip below
/// zero within that tolerance are clamped before the square root.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    constexpr double kEigTol = 1e-12;
    if (eigenvalues(a).second < -kEigTol || eigenvalues(b).second < -kEigTol)
        throw unphysical_input("fidelity: input has a negative eigenvalue");
    const double tr_ab = a.r00 * b.r00 + a.r11 * b.r11
                       + 2.0 * (a.r01_re * b.r01_re + a.r01_im * b.r01_im);
    const double det_a = std::max(0.0, det(a));
    const double det_b = std::max(0.0, det(b));
    return tr_ab + 2.0 * std::sqrt(det_a * det_b);
}

}  // namespace tomofit
