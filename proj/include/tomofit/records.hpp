#pragma once

#include <cmath>
#include <string>

#include "tomofit/errors.hpp"
#include "tomofit/stokes.hpp"

namespace tomofit {

/**
 * Raw measurement records.
 *
 * Counts are stored as non-negative reals rather than integers so that
 * pre-normalized or dark-count-corrected data can flow through the same
 * pathway. None of the Stokes computations clamp their result: out-of-range
 * components are the expected failure mode of real data and are handled
 * downstream by the seeding and projection stages.
 */

/// Four-measurement photon counts; the ensemble size is N = n_h + n_v.
struct CountRecord {
    double n_h = 0.0;
    double n_v = 0.0;
    double n_d = 0.0;
    double n_r = 0.0;
    std::string label{};
};

/// Six-measurement photon counts, one complete basis pair per Pauli axis.
struct SixCountRecord {
    double n_d = 0.0;
    double n_a = 0.0;
    double n_r = 0.0;
    double n_l = 0.0;
    double n_h = 0.0;
    double n_v = 0.0;
    std::string label{};
};

/// Beam intensities for light-beam setups without single-photon counting.
struct IntensityRecord {
    double i_total = 0.0;
    double i_h = 0.0;
    double i_d = 0.0;
    double i_r = 0.0;
    std::string label{};
};

namespace detail {
inline void require_count(double value, const char* name, const char* op) {
    if (!std::isfinite(value) || value < 0.0)
        throw invalid_input(std::string(op) + ": " + name + " must be a finite non-negative value");
}
}  // namespace detail

/// s_i = 2 N_x / N - 1 with N = n_h + n_v. May land outside [-1, 1] when a
/// count exceeds the ensemble size; the value is returned as-is.
inline StokesVector stokes_from_counts(const CountRecord& rec) {
    detail::require_count(rec.n_h, "n_h", "stokes_from_counts");
    detail::require_count(rec.n_v, "n_v", "stokes_from_counts");
    detail::require_count(rec.n_d, "n_d", "stokes_from_counts");
    detail::require_count(rec.n_r, "n_r", "stokes_from_counts");
    const double n = rec.n_h + rec.n_v;
    if (n <= 0.0) throw empty_ensemble("stokes_from_counts: n_h + n_v = 0");
    return {2.0 * rec.n_d / n - 1.0, 2.0 * rec.n_r / n - 1.0, 2.0 * rec.n_h / n - 1.0};
}

/// Per-axis normalized differences; each component lies in [-1, 1] by
/// construction because every axis carries its own pair total.
inline StokesVector stokes_from_six_counts(const SixCountRecord& rec) {
    detail::require_count(rec.n_d, "n_d", "stokes_from_six_counts");
    detail::require_count(rec.n_a, "n_a", "stokes_from_six_counts");
    detail::require_count(rec.n_r, "n_r", "stokes_from_six_counts");
    detail::require_count(rec.n_l, "n_l", "stokes_from_six_counts");
    detail::require_count(rec.n_h, "n_h", "stokes_from_six_counts");
    detail::require_count(rec.n_v, "n_v", "stokes_from_six_counts");
    const double nda = rec.n_d + rec.n_a;
    const double nrl = rec.n_r + rec.n_l;
    const double nhv = rec.n_h + rec.n_v;
    if (nda <= 0.0)
        throw empty_basis("stokes_from_six_counts: n_d + n_a = 0 (diagonal/antidiagonal basis)");
    if (nrl <= 0.0)
        throw empty_basis("stokes_from_six_counts: n_r + n_l = 0 (circular basis)");
    if (nhv <= 0.0)
        throw empty_basis("stokes_from_six_counts: n_h + n_v = 0 (horizontal/vertical basis)");
    return {(rec.n_d - rec.n_a) / nda, (rec.n_r - rec.n_l) / nrl, (rec.n_h - rec.n_v) / nhv};
}

/// s_i = 2 I_x / I - 1. An apparatus reporting I_H above the total intensity
/// yields s3 > 1 here; that out-of-range value is propagated deliberately.
inline StokesVector stokes_from_intensities(const IntensityRecord& rec) {
    detail::require_count(rec.i_total, "i_total", "stokes_from_intensities");
    detail::require_count(rec.i_h, "i_h", "stokes_from_intensities");
    detail::require_count(rec.i_d, "i_d", "stokes_from_intensities");
    detail::require_count(rec.i_r, "i_r", "stokes_from_intensities");
    if (rec.i_total <= 0.0) throw zero_intensity("stokes_from_intensities: i_total = 0");
    return {2.0 * rec.i_d / rec.i_total - 1.0, 2.0 * rec.i_r / rec.i_total - 1.0,
            2.0 * rec.i_h / rec.i_total - 1.0};
}

}  // namespace tomofit
