#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "steklov/presets.hpp"
#include "steklov/solver.hpp"
#include "support/reference_tables.hpp"

using namespace steklov;
using doctest::Approx;

namespace {

ConformalShape random_shape(std::mt19937& rng, int modes, double amplitude) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (;;) {
        std::vector<cplx> coeffs = {{0.0, 0.0}, {1.0, 0.0}};
        for (int k = 2; k <= modes; ++k)
            coeffs.push_back(amplitude / (k * k) * cplx{dist(rng), dist(rng)});
        ConformalShape shape(coeffs);
        if (shape.min_boundary_derivative() > 0.2) return shape;
    }
}

} // namespace

TEST_CASE("B diagonal is (0, 1..N2, 1..N2)") {
    GeneralizedSystem sys = assemble(preset_two_fold(), 6);
    REQUIRE(sys.size() == 13);
    for (int k = 0; k <= 6; ++k) CHECK(sys.B_diag(k) == Approx(k));
    for (int k = 1; k <= 6; ++k) CHECK(sys.B_diag(6 + k) == Approx(k));
}

TEST_CASE("disk assembly decouples: lambda c_k = k c_k") {
    GeneralizedSystem sys = assemble(preset_disk(), 8);
    // d_0 = 1 gives A = diag(2, 1, ..., 1): the rows reduce to lambda c_k = k c_k.
    CHECK(sys.A(0, 0) == Approx(2.0).epsilon(1e-14));
    for (int i = 1; i < sys.size(); ++i) {
        CHECK(sys.A(i, i) == Approx(1.0).epsilon(1e-13));
        for (int j = 0; j < i; ++j) {
            CHECK(std::abs(sys.A(i, j)) < 1e-13);
            CHECK(std::abs(sys.A(j, i)) < 1e-13);
        }
    }
}

TEST_CASE("assembled matrix is symmetric") {
    std::mt19937 rng(2);
    ConformalShape shape = random_shape(rng, 6, 0.4);
    GeneralizedSystem sys = assemble(shape, 10);
    CHECK((sys.A - sys.A.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("assemble rejects a modulus series with insufficient bandwidth") {
    FourierSeries narrow = boundary_modulus(preset_two_fold(), 8);
    CHECK_THROWS_AS(assemble(narrow, 8), input_error); // needs |l| <= 16
    CHECK_NOTHROW(assemble(boundary_modulus(preset_two_fold(), 16), 8));
}

TEST_CASE("disk spectrum is 0, 1, 1, 2, 2, ... to round-off") {
    for (int n2 : {8, 16, 64}) {
        SteklovSpectrum spec = solve_spectrum(preset_disk(), n2);
        REQUIRE(spec.size() == 2 * n2 + 1);
        CHECK(std::abs(spec.eigenvalues[0]) < 1e-13);
        for (int i = 1; i < spec.size(); ++i)
            CHECK(std::abs(spec.eigenvalues[i] - (i + 1) / 2) < 1e-13);
    }
}

TEST_CASE("zero mode has a constant eigenfunction") {
    SteklovSpectrum spec = solve_spectrum(preset_two_fold(), 8);
    CHECK(std::abs(spec.eigenvalues[0]) < 1e-10);
    FourierSeries psi0 = spec.potential(0);
    const double c0 = std::abs(psi0.coeff(0));
    CHECK(c0 > 0.1);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(psi0.coeff(k)) < 1e-10 * c0);
}

TEST_CASE("two-fold shape at N = 2^4: published column where the truncation convention is robust") {
    SteklovSpectrum spec = solve_spectrum(preset_two_fold(), 8);
    const ConformalShape shape = preset_two_fold();
    auto normalized = [&](int k) {
        return normalized_eigenvalue(spec, shape, Normalization::area, k);
    };
    // Low-coupling modes agree with the published truncated values to
    // round-off; modes touching the truncation edge depend on how the
    // reference implementation indexed d_l beyond N2, so they are compared
    // against the converged column instead.
    for (int k : {1, 2, 5, 6, 9, 10})
        CHECK(normalized(k) == Approx(tables::two_fold_n16[k - 1]).epsilon(1e-9));
    CHECK(normalized(1) == Approx(1.643146123296456).epsilon(3e-12));
    for (int k : {3, 4})
        CHECK(normalized(k) == Approx(tables::two_fold_n16[k - 1]).epsilon(1e-7));
    for (int k : {7, 8, 11})
        CHECK(normalized(k) == Approx(tables::two_fold_n128[k - 1]).epsilon(1e-3));
}

TEST_CASE("two-fold shape reproduces the published N = 2^7 column") {
    SteklovSpectrum spec = solve_spectrum(preset_two_fold(), 64);
    const ConformalShape shape = preset_two_fold();
    for (int k = 1; k <= 11; ++k) {
        const double normalized =
            normalized_eigenvalue(spec, shape, Normalization::area, k);
        CHECK(normalized == Approx(tables::two_fold_n128[k - 1]).epsilon(1e-9));
    }
}

TEST_CASE("full and symmetric solvers agree on real-coefficient shapes") {
    for (const ConformalShape& shape :
         {preset_disk(), preset_two_fold(), preset_two_fold_fat(), preset_five_fold()}) {
        const int n2 = 16;
        SteklovSpectrum full = solve_spectrum(shape, n2);
        SteklovSpectrum sym = solve_spectrum_symmetric(shape, n2);
        REQUIRE(full.size() == sym.size());
        for (int i = 0; i < full.size(); ++i)
            CHECK(full.eigenvalues[i] == Approx(sym.eigenvalues[i]).epsilon(1e-10));
    }
}

TEST_CASE("symmetric solver rejects complex coefficients") {
    ConformalShape tilted({{0, 0}, {1, 0}, {0, 0}, {0.02, 0.04}});
    CHECK_THROWS_AS(solve_spectrum_symmetric(tilted, 8), input_error);
}

TEST_CASE("five-fold shape at N = 2^8 matches the published column via the symmetric solver") {
    const ConformalShape shape = preset_five_fold();
    SteklovSpectrum spec = solve_spectrum_symmetric(shape, 128);
    for (int k = 1; k <= 11; ++k) {
        const double normalized =
            normalized_eigenvalue(spec, shape, Normalization::area, k);
        CHECK(normalized == Approx(tables::five_fold_n256[k - 1]).epsilon(1e-9));
    }
    // k-fold multiplicity: the first four pairs are degenerate.
    for (int k : {1, 3, 5, 7})
        CHECK(spec.eigenvalues[k] ==
              Approx(spec.eigenvalues[k + 1]).epsilon(1e-9));
}

TEST_CASE("homothety: lambda_k(t Omega) * t = lambda_k(Omega)") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 4; ++trial) {
        ConformalShape shape = random_shape(rng, 5, 0.5);
        const int n2 = 16;
        SteklovSpectrum base = solve_spectrum(shape, n2);
        for (double t : {0.5, 2.0, 3.0}) {
            SteklovSpectrum scaled = solve_spectrum(shape.scaled({t, 0.0}), n2);
            for (int k = 1; k <= n2 / 2; ++k)
                CHECK(scaled.eigenvalues[k] * t ==
                      Approx(base.eigenvalues[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("normalized eigenfunction: disk modes") {
    SteklovSpectrum spec = solve_spectrum(preset_disk(), 16);
    FourierSeries psi1 = normalized_eigenfunction(spec, 1, preset_disk());
    // Psi~ = w / sqrt(pi) (up to the sign convention, fixed to positive).
    CHECK(std::abs(psi1.coeff(1)) == Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
    for (int k : {0, 2, 3, 4})
        CHECK(std::abs(psi1.coeff(k)) < 1e-12);

    // Index 3 is the first lambda = 2 mode: Psi~ proportional to w^2.
    CHECK(spec.eigenvalues[3] == Approx(2.0).epsilon(1e-13));
    FourierSeries psi3 = normalized_eigenfunction(spec, 3, preset_disk());
    CHECK(std::abs(psi3.coeff(2)) == Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(psi3.coeff(1)) < 1e-12);
}

TEST_CASE("normalized eigenfunction satisfies the boundary normalization") {
    for (const ConformalShape& shape : {preset_two_fold_fat(), preset_five_fold()}) {
        const int n2 = 32;
        SteklovSpectrum spec = solve_spectrum(shape, n2);
        for (int k : {1, 2, 5}) {
            FourierSeries psi = normalized_eigenfunction(spec, k, shape);
            const int m = 512;
            GridSamples pg = detail::sample_on_grid(psi, m);
            std::vector<double> speed = boundary_speed(shape.truncated(n2), m);
            double integral = 0.0;
            for (int j = 0; j < m; ++j) {
                const double u = pg.values[j].real();
                integral += u * u * speed[j];
            }
            integral *= 2.0 * std::numbers::pi / m;
            CHECK(integral == Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("normalized eigenfunction respects the trusted range") {
    SteklovSpectrum spec = solve_spectrum(preset_two_fold(), 8); // trusted_count = 4
    CHECK(spec.trusted_count == 4);
    CHECK_NOTHROW(normalized_eigenfunction(spec, 0, preset_two_fold()));
    CHECK_NOTHROW(normalized_eigenfunction(spec, 4, preset_two_fold()));
    CHECK_THROWS_AS(normalized_eigenfunction(spec, 5, preset_two_fold()), input_error);
}

TEST_CASE("normalized eigenvalues: disk closed forms and scale invariance") {
    SteklovSpectrum spec = solve_spectrum(preset_disk(), 8);
    CHECK(normalized_eigenvalue(spec, preset_disk(), Normalization::area, 1) ==
          Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(normalized_eigenvalue(spec, preset_disk(), Normalization::perimeter, 1) ==
          Approx(2.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(normalized_eigenvalue(spec, preset_disk(), Normalization::none, 1) ==
          Approx(1.0).epsilon(1e-13));

    const ConformalShape doubled = preset_two_fold().scaled({2.0, 0.0});
    SteklovSpectrum a = solve_spectrum(preset_two_fold(), 16);
    SteklovSpectrum b = solve_spectrum(doubled, 16);
    CHECK(normalized_eigenvalue(a, preset_two_fold(), Normalization::area, 1) ==
          Approx(normalized_eigenvalue(b, doubled, Normalization::area, 1)).epsilon(1e-12));
}

TEST_CASE("degenerate shapes are rejected by the solve path") {
    ConformalShape pinched({{0, 0}, {1, 0}, {0, 0}, {1.0 / 3.0, 0}});
    CHECK_THROWS_AS(solve_spectrum(pinched, 8), degenerate_shape_error);
}
