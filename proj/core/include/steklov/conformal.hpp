#pragma once

#include <vector>

#include "steklov/fourier.hpp"

namespace steklov {

// Analytic map z = f(w) = sum_{k>=0} a_k w^k from the closed unit disk onto
// the physical domain. The coefficient list is the sole description of the
// geometry. A shape is degenerate when f_w comes close to vanishing on the
// boundary (loss of univalence; kinks).
class ConformalShape {
public:
    ConformalShape() : ConformalShape(std::vector<cplx>{cplx{0.0, 0.0}, cplx{1.0, 0.0}}) {}

    // Coefficients a_0..a_K by index.
    explicit ConformalShape(std::vector<cplx> coeffs);

    // Requires the series to be analytic (no negative modes).
    static ConformalShape from_series(const FourierSeries& s, double tol = 1e-12);

    int truncation() const { return series_.half_width(); }
    cplx coeff(int k) const { return k < 0 ? cplx{0.0, 0.0} : series_.coeff(k); }
    const FourierSeries& series() const { return series_; }
    const FourierSeries& map_derivative() const { return derivative_; } // f_w

    ConformalShape truncated(int truncation) const;
    ConformalShape scaled(cplx factor) const;

    // All coefficients real within tol (mirror-symmetric domain).
    bool has_real_coefficients(double tol = 0.0) const;

    // min |f_w| over a 4x-refined boundary grid; the univalence proxy.
    double min_boundary_derivative() const;
    bool degenerate() const { return min_boundary_derivative() <= degeneracy_threshold; }
    void require_nondegenerate() const;

    static constexpr double degeneracy_threshold = 1e-6;

private:
    FourierSeries series_;
    FourierSeries derivative_;
};

// Fourier coefficients d_l of |f_w| on |w| = 1, computed pseudo-spectrally on
// a zero-padded grid. Real-valued, so d_{-l} = conj(d_l). Default half-width
// is 2K, enough for the eigenproblem blocks.
FourierSeries boundary_modulus(const ConformalShape& shape, int half_width = -1);

// Grid samples of |f_w| at theta_j = 2 pi j / M.
std::vector<double> boundary_speed(const ConformalShape& shape, int grid_size);

// Boundary curvature kappa(theta_j) = Re{conj(w f_w) (w (w f_w)_w)} / |w f_w|^3
// evaluated spectrally from w f_w = sum k a_k w^k and w (w f_w)_w = sum k^2 a_k w^k.
std::vector<double> curvature(const ConformalShape& shape, int grid_size);

// |Omega| = sum_{k>=1} pi k |a_k|^2.
double area(const ConformalShape& shape);

// 2 pi d_0.
double perimeter(const ConformalShape& shape);

// Samples z_j = f(e^{i theta_j}), any M >= 1.
std::vector<cplx> boundary_curve(const ConformalShape& shape, int grid_size);

// max|f_w| / min|f_w| over the boundary grid; large values flag conformal
// crowding and the accuracy loss that comes with it.
double crowding_diagnostic(const ConformalShape& shape);

} // namespace steklov
