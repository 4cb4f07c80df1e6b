#include "steklov/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace steklov {

namespace {

// Eigenpairs of B C = lambda A C for symmetric A (must be positive definite)
// and diagonal nonnegative B. Via A = L L^T the pencil becomes the ordinary
// symmetric problem (L^-1 B L^-T) y = lambda y with C = L^-T y.
void solve_definite_pencil(const Eigen::MatrixXd& a, const Eigen::VectorXd& b_diag,
                           Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw degenerate_shape_error(
            "eigensolve: boundary mass matrix not positive definite (degenerate or crowded map)");

    Eigen::MatrixXd v = b_diag.cwiseSqrt().asDiagonal(); // B^{1/2}
    llt.matrixL().solveInPlace(v);                       // L^-1 B^{1/2}
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(v.rows(), v.rows());
    s.selfadjointView<Eigen::Lower>().rankUpdate(v); // S = L^-1 B L^-T

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success)
        throw numerical_error("eigensolve: symmetric eigensolver failed to converge");

    values = eig.eigenvalues();
    vectors = eig.eigenvectors();
    llt.matrixU().solveInPlace(vectors); // C = L^-T y

    // Fix each eigenvector's sign deterministically.
    for (int i = 0; i < vectors.cols(); ++i) {
        int arg_max = 0;
        vectors.col(i).cwiseAbs().maxCoeff(&arg_max);
        if (vectors(arg_max, i) < 0.0) vectors.col(i) = -vectors.col(i);
    }
}

FourierSeries real_boundary_modulus(const ConformalShape& shape, int half_width) {
    FourierSeries d = boundary_modulus(shape, half_width);
    FourierSeries out(half_width);
    for (int l = -half_width; l <= half_width; ++l)
        out.set_coeff(l, cplx{d.coeff(l).real(), 0.0});
    return out;
}

} // namespace

FourierSeries SteklovSpectrum::potential(int index) const {
    if (index < 0 || index >= size())
        throw input_error("SteklovSpectrum::potential: index out of range");
    FourierSeries psi(truncation);
    psi.set_coeff(0, cplx{eigenvectors(0, index), 0.0});
    for (int k = 1; k <= truncation; ++k)
        psi.set_coeff(k, cplx{eigenvectors(k, index), eigenvectors(truncation + k, index)});
    return psi;
}

GeneralizedSystem assemble(const FourierSeries& modulus, int n2) {
    if (n2 < 1) throw input_error("assemble: truncation must be at least 1");
    if (modulus.half_width() < 2 * n2)
        throw input_error("assemble: modulus coefficients do not reach |l| = 2 N2");

    auto dr = [&](int l) { return modulus.coeff(l).real(); };
    auto di = [&](int l) { return modulus.coeff(l).imag(); };

    GeneralizedSystem sys;
    sys.n2 = n2;
    const int n = 2 * n2 + 1;
    sys.A.setZero(n, n);
    sys.B_diag.setZero(n);

    for (int k = 0; k <= n2; ++k) {
        sys.B_diag(k) = k;
        for (int m = 0; m <= n2; ++m) sys.A(k, m) = dr(k - m) + dr(k + m);
        for (int m = 1; m <= n2; ++m) sys.A(k, n2 + m) = -di(k - m) + di(k + m);
    }
    for (int k = 1; k <= n2; ++k) {
        sys.B_diag(n2 + k) = k;
        for (int m = 0; m <= n2; ++m) sys.A(n2 + k, m) = di(k - m) + di(k + m);
        for (int m = 1; m <= n2; ++m) sys.A(n2 + k, n2 + m) = dr(k - m) - dr(k + m);
    }
    return sys;
}

GeneralizedSystem assemble(const ConformalShape& shape, int n2) {
    return assemble(boundary_modulus(shape.truncated(n2), 2 * n2), n2);
}

SteklovSpectrum solve_spectrum(const GeneralizedSystem& system) {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    solve_definite_pencil(system.A, system.B_diag, values, vectors);

    SteklovSpectrum spec;
    spec.truncation = system.n2;
    spec.trusted_count = system.n2 / 2;
    spec.eigenvalues.assign(values.data(), values.data() + values.size());
    spec.eigenvectors = std::move(vectors);

    if (!spec.eigenvalues.empty() && spec.eigenvalues.front() < -1e-10)
        throw numerical_error("eigensolve: negative Steklov eigenvalue beyond round-off");
    return spec;
}

SteklovSpectrum solve_spectrum(const ConformalShape& shape, int n2) {
    return solve_spectrum(assemble(shape, n2));
}

SteklovSpectrum solve_spectrum_symmetric(const ConformalShape& shape, int n2) {
    if (n2 < 1) throw input_error("solve_spectrum_symmetric: truncation must be at least 1");
    const double scale = std::max(1.0, shape.series().max_abs_coeff());
    if (!shape.has_real_coefficients(1e-12 * scale))
        throw input_error("solve_spectrum_symmetric: coefficients are not real");

    std::vector<cplx> real_coeffs(static_cast<std::size_t>(shape.truncation()) + 1);
    for (int k = 0; k <= shape.truncation(); ++k)
        real_coeffs[static_cast<std::size_t>(k)] = cplx{shape.coeff(k).real(), 0.0};
    const ConformalShape mirror = ConformalShape(std::move(real_coeffs)).truncated(n2);

    const FourierSeries d = real_boundary_modulus(mirror, 2 * n2);
    auto dd = [&](int l) { return d.coeff(l).real(); };

    // Cosine block, modes 0..N2.
    Eigen::MatrixXd a_cos(n2 + 1, n2 + 1);
    Eigen::VectorXd b_cos(n2 + 1);
    for (int k = 0; k <= n2; ++k) {
        b_cos(k) = k;
        for (int m = 0; m <= n2; ++m) a_cos(k, m) = dd(k - m) + dd(k + m);
    }
    // Sine block, modes 1..N2 (the k = 0 row of the sine system vanishes identically).
    Eigen::MatrixXd a_sin(n2, n2);
    Eigen::VectorXd b_sin(n2);
    for (int k = 1; k <= n2; ++k) {
        b_sin(k - 1) = k;
        for (int m = 1; m <= n2; ++m) a_sin(k - 1, m - 1) = dd(k - m) - dd(k + m);
    }

    Eigen::VectorXd values_cos, values_sin;
    Eigen::MatrixXd vectors_cos, vectors_sin;
    solve_definite_pencil(a_cos, b_cos, values_cos, vectors_cos);
    solve_definite_pencil(a_sin, b_sin, values_sin, vectors_sin);

    struct Entry {
        double value;
        bool sine;
        int column;
    };
    std::vector<Entry> merged;
    merged.reserve(static_cast<std::size_t>(2 * n2 + 1));
    for (int i = 0; i <= n2; ++i) merged.push_back({values_cos(i), false, i});
    for (int i = 0; i < n2; ++i) merged.push_back({values_sin(i), true, i});
    // Cosine entries come first, so stable sort leaves the lower dominant
    // coefficient index first on exact ties.
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    SteklovSpectrum spec;
    spec.truncation = n2;
    spec.trusted_count = n2 / 2;
    spec.eigenvalues.reserve(merged.size());
    spec.eigenvectors.setZero(2 * n2 + 1, static_cast<int>(merged.size()));
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const Entry& e = merged[i];
        spec.eigenvalues.push_back(e.value);
        if (e.sine)
            spec.eigenvectors.block(n2 + 1, static_cast<int>(i), n2, 1) =
                vectors_sin.col(e.column);
        else
            spec.eigenvectors.block(0, static_cast<int>(i), n2 + 1, 1) =
                vectors_cos.col(e.column);
    }
    return spec;
}

FourierSeries normalized_eigenfunction(const SteklovSpectrum& spectrum, int index,
                                       const ConformalShape& shape) {
    if (index < 0 || index >= spectrum.size())
        throw input_error("normalized_eigenfunction: index out of range");
    if (index > spectrum.trusted_count && index != 0)
        throw input_error("normalized_eigenfunction: mode beyond trusted truncation range");

    FourierSeries psi = spectrum.potential(index);
    const int m = next_power_of_two(4 * spectrum.truncation + 2);
    GridSamples psi_grid = detail::sample_on_grid(psi, m);
    const std::vector<double> speed = boundary_speed(shape.truncated(spectrum.truncation), m);

    double b0 = 0.0;
    for (int j = 0; j < m; ++j) {
        const double u = psi_grid.values[static_cast<std::size_t>(j)].real();
        b0 += u * u * speed[static_cast<std::size_t>(j)];
    }
    b0 /= m;
    if (!(b0 > 0.0))
        throw numerical_error("normalized_eigenfunction: vanishing boundary norm");

    psi *= cplx{1.0 / std::sqrt(2.0 * std::numbers::pi * b0), 0.0};
    return psi;
}

double normalized_eigenvalue(const SteklovSpectrum& spectrum, const ConformalShape& shape,
                             Normalization norm, int index) {
    if (index < 0 || index >= spectrum.size())
        throw input_error("normalized_eigenvalue: index out of range");
    const double lambda = spectrum.eigenvalues[static_cast<std::size_t>(index)];
    switch (norm) {
        case Normalization::none:
            return lambda;
        case Normalization::area:
            return lambda * std::sqrt(area(shape));
        case Normalization::perimeter:
            return lambda * perimeter(shape);
    }
    throw input_error("normalized_eigenvalue: unknown normalization");
}

} // namespace steklov
