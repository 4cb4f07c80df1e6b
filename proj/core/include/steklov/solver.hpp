#pragma once

#include <Eigen/Dense>

#include "steklov/conformal.hpp"

namespace steklov {

// The boundary eigenproblem Re{w Psi_w} = lambda |f_w| Re{Psi} on |w| = 1,
// discretized in Fourier coefficients of Psi up to the truncation N2:
// lambda A C = B C with C = (c_0^r..c_{N2}^r, c_1^i..c_{N2}^i).
//
// A couples through the modulus coefficients d_l of |f_w| and is symmetric
// (d_{-l} = conj(d_l)); its quadratic form is the weighted boundary product
// (1/pi) integral of u v |f_w| d theta, positive definite whenever the shape
// is nondegenerate. B is the diagonal of mode numbers.
struct GeneralizedSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd B_diag; // (0, 1, .., N2, 1, .., N2)
    int n2 = 0;

    int size() const { return 2 * n2 + 1; }
};

struct SteklovSpectrum {
    std::vector<double> eigenvalues;  // ascending, eigenvalues[0] ~ 0
    Eigen::MatrixXd eigenvectors;     // column i pairs with eigenvalues[i]
    int truncation = 0;               // N2
    int trusted_count = 0;            // modes above are truncation-polluted

    int size() const { return static_cast<int>(eigenvalues.size()); }

    // Psi = sum_k (c_k^r + i c_k^i) w^k rebuilt from column `index`.
    FourierSeries potential(int index) const;
};

// Build the pencil from the modulus coefficients; d must reach |l| = 2*N2.
GeneralizedSystem assemble(const FourierSeries& modulus, int n2);

// Convenience: truncate the shape to N2 and assemble from its boundary modulus.
GeneralizedSystem assemble(const ConformalShape& shape, int n2);

// Dense solve of lambda A C = B C via Cholesky of A and a symmetric
// eigensolve of L^-1 B L^-T (similar to A^-1 B, so eigenvalues are the
// Steklov lambda directly). Eigenvalues are structurally real.
SteklovSpectrum solve_spectrum(const GeneralizedSystem& system);
SteklovSpectrum solve_spectrum(const ConformalShape& shape, int n2);

// Reduced solve for mirror-symmetric domains (all a_k real, hence d_l real):
// the pencil decouples into a cosine block of size N2+1 and a sine block of
// size N2 whose merged spectrum matches the full solve.
SteklovSpectrum solve_spectrum_symmetric(const ConformalShape& shape, int n2);

// Psi scaled so the boundary integral of (Re Psi)^2 |f_w| equals one
// (zeroth pseudo-spectral coefficient b_0 of (Re Psi)^2 |f_w| gives the
// normalization 1/sqrt(2 pi b_0)). Index must not exceed trusted_count,
// except index 0 (the constant mode) which is always available.
FourierSeries normalized_eigenfunction(const SteklovSpectrum& spectrum, int index,
                                       const ConformalShape& shape);

enum class Normalization { none, area, perimeter };

// lambda_k sqrt|Omega| (scale-invariant) or lambda_k |dOmega|.
double normalized_eigenvalue(const SteklovSpectrum& spectrum, const ConformalShape& shape,
                             Normalization norm, int index);

} // namespace steklov
