#pragma once

#include <cmath>

namespace tomofit {

/**
 * Normalized Stokes vector of a single polarization qubit.
 *
 * Components are the Pauli expectation values: s1 on the diagonal/antidiagonal
 * axis, s2 on the right/left-circular axis, s3 on the horizontal/vertical
 * axis. A physical state satisfies s1^2 + s2^2 + s3^2 <= 1 (surface = pure
 * states), but vectors computed from raw measurements may violate that bound,
 * so no range is enforced here.
 */
struct StokesVector {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    double norm2() const { return s1 * s1 + s2 * s2 + s3 * s3; }
    double norm() const { return std::sqrt(norm2()); }
    bool is_finite() const {
        return std::isfinite(s1) && std::isfinite(s2) && std::isfinite(s3);
    }
};

/// Physicality gate: |s|^2 <= 1 + tol. Equality holds exactly for pure states.
inline bool is_physical(const StokesVector& s, double tol = 0.0) {
    return s.norm2() <= 1.0 + tol;
}

}  // namespace tomofit
