#pragma once

// Umbrella header: single-qubit polarization tomography with analytic
// T-matrix seeding, maximum-likelihood refinement, and fit-free Bloch-ball
// projection.

#include "tomofit/density.hpp"
#include "tomofit/errors.hpp"
#include "tomofit/fit.hpp"
#include "tomofit/nelder_mead.hpp"
#include "tomofit/parse.hpp"
#include "tomofit/projection.hpp"
#include "tomofit/records.hpp"
#include "tomofit/runner.hpp"
#include "tomofit/stokes.hpp"
#include "tomofit/tmatrix.hpp"
