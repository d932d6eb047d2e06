#pragma once

#include <cmath>

#include "tomofit/density.hpp"
#include "tomofit/errors.hpp"
#include "tomofit/stokes.hpp"

namespace tomofit {

/// Fit-free repair of an unphysical Stokes vector: scale it radially back
/// onto the Bloch sphere, keeping its direction. Vectors already inside the
/// ball are returned unchanged, bit for bit. The result always passes the
/// physicality gate; when scaling happened it lands on the sphere, i.e. on a
/// pure state, which need not be the optimum a maximum-likelihood fit would
/// reach.
inline StokesVector project_to_bloch_ball(const StokesVector& s) {
    if (!s.is_finite()) throw invalid_input("project_to_bloch_ball: non-finite Stokes vector");
    const double n2 = s.norm2();
    if (n2 <= 1.0) return s;
    const double inv_norm = 1.0 / std::sqrt(n2);
    return {s.s1 * inv_norm, s.s2 * inv_norm, s.s3 * inv_norm};
}

/// Density matrix of the projected vector; physical for every finite input.
inline DensityMatrix physical_density_via_projection(const StokesVector& s) {
    DensityMatrix rho = density_from_stokes(project_to_bloch_ball(s));
    rho.raw = false;  // on or inside the ball up to rounding
    return rho;
}

}  // namespace tomofit
