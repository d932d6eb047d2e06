#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <tomofit/density.hpp>
#include <tomofit/stokes.hpp>

#include "oracles.hpp"

using tomofit::DensityMatrix;
using tomofit::StokesVector;

namespace {

StokesVector random_stokes(std::mt19937& rng, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("density_from_stokes maps the axis states", "[core]") {
    const DensityMatrix mixed = tomofit::density_from_stokes({0.0, 0.0, 0.0});
    CHECK(mixed.r00 == 0.5);
    CHECK(mixed.r11 == 0.5);
    CHECK(mixed.r01_re == 0.0);
    CHECK(mixed.r01_im == 0.0);
    CHECK_FALSE(mixed.raw);

    const DensityMatrix diag = tomofit::density_from_stokes({1.0, 0.0, 0.0});
    CHECK(diag.r00 == 0.5);
    CHECK(diag.r11 == 0.5);
    CHECK(diag.r01_re == 0.5);
    CHECK(diag.r01_im == 0.0);

    const DensityMatrix circ = tomofit::density_from_stokes({0.0, 1.0, 0.0});
    CHECK(circ.r00 == 0.5);
    CHECK(circ.r01_re == 0.0);
    CHECK(circ.r01_im == -0.5);  // rho01 = -i/2
}

TEST_CASE("density_from_stokes flags out-of-ball data and rejects non-finite input", "[core]") {
    CHECK(tomofit::density_from_stokes({0.6, 0.6, 0.6}).raw);
    CHECK_FALSE(tomofit::density_from_stokes({0.3, 0.4, 0.5}).raw);
    CHECK_THROWS_AS(tomofit::density_from_stokes({std::nan(""), 0.0, 0.0}),
                    tomofit::invalid_input);
}

TEST_CASE("stokes_from_density inverts the axis states", "[core]") {
    const StokesVector zero_state = tomofit::stokes_from_density({1.0, 0.0, 0.0, 0.0});
    CHECK(zero_state.s1 == 0.0);
    CHECK(zero_state.s2 == 0.0);
    CHECK(zero_state.s3 == 1.0);

    const StokesVector diag = tomofit::stokes_from_density({0.5, 0.5, 0.5, 0.0});
    CHECK(diag.s1 == 1.0);
    CHECK(diag.s2 == 0.0);
    CHECK(diag.s3 == 0.0);

    const StokesVector mixed = tomofit::stokes_from_density({0.5, 0.5, 0.0, 0.0});
    CHECK(mixed.s1 == 0.0);
    CHECK(mixed.s2 == 0.0);
    CHECK(mixed.s3 == 0.0);
}

TEST_CASE("stokes conversion agrees with literal Pauli traces", "[core]") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 1000; ++i) {
        const StokesVector s = random_stokes(rng, 1.5);
        const DensityMatrix rho = tomofit::density_from_stokes(s);
        const StokesVector direct = oracle::stokes_by_pauli_trace(oracle::to_matrix(rho));
        const StokesVector lib = tomofit::stokes_from_density(rho);
        CHECK(std::abs(direct.s1 - lib.s1) < 1e-15);
        CHECK(std::abs(direct.s2 - lib.s2) < 1e-15);
        CHECK(std::abs(direct.s3 - lib.s3) < 1e-15);
    }
}

TEST_CASE("is_physical implements the unit-ball gate", "[core]") {
    CHECK_FALSE(tomofit::is_physical({0.6, 0.6, 0.6}));
    CHECK(tomofit::is_physical({1.0, 0.0, 0.0}));  // pure state: equality holds
    CHECK(tomofit::is_physical({0.3, 0.4, 0.5}));
    CHECK(tomofit::is_physical({0.0, 0.0, 1.0 + 1e-10}, 1e-9));
}

TEST_CASE("eigenvalues: closed form matches characteristic-polynomial bisection", "[core]") {
    const auto mixed = tomofit::eigenvalues({0.5, 0.5, 0.0, 0.0});
    CHECK(mixed.first == 0.5);
    CHECK(mixed.second == 0.5);

    const auto pure = tomofit::eigenvalues({1.0, 0.0, 0.0, 0.0});
    CHECK(pure.first == 1.0);
    CHECK(pure.second == 0.0);

    // Out-of-ball matrix: lambda = (1 +/- |s|)/2 with |s| = sqrt(1.08).
    const DensityMatrix raw = tomofit::density_from_stokes({0.6, 0.6, 0.6});
    const auto eig = tomofit::eigenvalues(raw);
    const double expected_hi = (1.0 + std::sqrt(1.08)) / 2.0;
    CHECK_THAT(eig.first, Catch::Matchers::WithinAbs(expected_hi, 1e-14));
    CHECK_THAT(eig.second, Catch::Matchers::WithinAbs(1.0 - expected_hi, 1e-14));

    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = tomofit::density_from_stokes(random_stokes(rng, 1.5));
        const auto fast = tomofit::eigenvalues(rho);
        const auto slow = oracle::eigenvalues_by_bisection(oracle::to_matrix(rho));
        CHECK_THAT(fast.first, Catch::Matchers::WithinAbs(slow.first, 1e-12));
        CHECK_THAT(fast.second, Catch::Matchers::WithinAbs(slow.second, 1e-12));
        CHECK(fast.first + fast.second == 1.0);
        CHECK(fast.first >= fast.second);
    }
}

TEST_CASE("purity: closed form matches direct matrix multiplication", "[core]") {
    CHECK(tomofit::purity({0.5, 0.5, 0.0, 0.0}) == 0.5);
    CHECK(tomofit::purity({1.0, 0.0, 0.0, 0.0}) == 1.0);

    const DensityMatrix rho = tomofit::density_from_stokes({0.5, 0.0, 0.0});
    CHECK_THAT(tomofit::purity(rho), Catch::Matchers::WithinAbs(0.625, 1e-15));
    const auto m = oracle::to_matrix(rho);
    CHECK_THAT(tomofit::purity(rho),
               Catch::Matchers::WithinAbs(std::real(oracle::trace(oracle::mul(m, m))), 1e-15));
}

TEST_CASE("fidelity: closed form matches the matrix-square-root route", "[core]") {
    const DensityMatrix ket0{1.0, 0.0, 0.0, 0.0};
    const DensityMatrix ket1{0.0, 1.0, 0.0, 0.0};
    const DensityMatrix mixed{0.5, 0.5, 0.0, 0.0};

    CHECK(tomofit::fidelity(ket0, ket0) == 1.0);
    CHECK(tomofit::fidelity(ket0, ket1) == 0.0);
    CHECK_THAT(tomofit::fidelity(mixed, ket0), Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(oracle::fidelity_by_matrix_sqrt(mixed, ket0),
               Catch::Matchers::WithinAbs(0.5, 1e-12));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        StokesVector a{u(rng), u(rng), u(rng)};
        StokesVector b{u(rng), u(rng), u(rng)};
        if (a.norm2() > 1.0 || b.norm2() > 1.0) continue;
        const DensityMatrix ra = tomofit::density_from_stokes(a);
        const DensityMatrix rb = tomofit::density_from_stokes(b);
        const double fast = tomofit::fidelity(ra, rb);
        CHECK_THAT(fast, Catch::Matchers::WithinAbs(oracle::fidelity_by_matrix_sqrt(ra, rb), 1e-12));
        CHECK_THAT(fast, Catch::Matchers::WithinAbs(tomofit::fidelity(rb, ra), 1e-15));
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0 + 1e-9);
        CHECK_THAT(tomofit::fidelity(ra, ra), Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("fidelity rejects unphysical inputs", "[core]") {
    const DensityMatrix raw = tomofit::density_from_stokes({0.6, 0.6, 0.6});
    const DensityMatrix ok = tomofit::density_from_stokes({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(tomofit::fidelity(raw, ok), tomofit::unphysical_input);
    CHECK_THROWS_AS(tomofit::fidelity(ok, raw), tomofit::unphysical_input);
}

TEST_CASE("round trip stokes -> density -> stokes is exact to rounding", "[core][property]") {
    std::mt19937 rng(123);
    for (int i = 0; i < 10000; ++i) {
        const StokesVector s = random_stokes(rng, 1.5);
        const StokesVector back = tomofit::stokes_from_density(tomofit::density_from_stokes(s));
        // s1 and s2 halve and double by powers of two: bit-exact. s3 passes
        // through (1 +/- s3)/2, one rounding each.
        CHECK(back.s1 == s.s1);
        CHECK(back.s2 == s.s2);
        CHECK(std::abs(back.s3 - s.s3) <= 5e-16);
    }
}

TEST_CASE("trace, determinant, and purity identities", "[core][property]") {
    std::mt19937 rng(456);
    for (int i = 0; i < 10000; ++i) {
        const StokesVector s = random_stokes(rng, 1.5);
        const DensityMatrix rho = tomofit::density_from_stokes(s);
        CHECK(std::abs(rho.r00 + rho.r11 - 1.0) <= 1e-12);
        CHECK(std::abs(tomofit::det(rho) - (1.0 - s.norm2()) / 4.0) <= 1e-12);
        CHECK(std::abs(tomofit::purity(rho) + 2.0 * tomofit::det(rho) - 1.0) <= 1e-12);
    }
}

TEST_CASE("physicality gate is equivalent to nonnegative spectrum", "[core][property]") {
    std::mt19937 rng(789);
    for (int i = 0; i < 10000; ++i) {
        const StokesVector s = random_stokes(rng, 1.5);
        const double lambda_min = tomofit::eigenvalues(tomofit::density_from_stokes(s)).second;
        if (tomofit::is_physical(s))
            CHECK(lambda_min >= -1e-12);
        else
            CHECK(lambda_min <= 1e-12);
    }
}
