#pragma once

#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/solver.hpp" // Normalization

namespace steklov {

// Annulus B(0,1) \ B(0,epsilon).
struct AnnulusSpec {
    double epsilon = 0.5;
};

// Unit-disk Steklov spectrum 0, 1, 1, 2, 2, ...
std::vector<double> disk_eigenvalues(int count);

// Both roots of the mode-k characteristic quadratic
// p_k(x) = x^2 - x k ((eps+1)/eps)((1+eps^2k)/(1-eps^2k)) + k^2/eps,
// returned ascending. Each root is a double Steklov eigenvalue.
std::pair<double, double> annulus_mode_roots(const AnnulusSpec& spec, int k);

// p_k evaluated at x; roots of this polynomial are the nonradial eigenvalues.
double annulus_characteristic(const AnnulusSpec& spec, int k, double x);

// Eigenvalue of the radial mode u(r) = lambda ln r + 1, the unique value
// satisfying u_r(1) = lambda u(1) and u_r(eps) = -lambda u(eps):
// lambda = (1+eps) / (eps ln(1/eps)).
double annulus_radial_eigenvalue(const AnnulusSpec& spec);

// First k_max mode pairs (each doubled), the radial eigenvalue, and the zero
// mode, sorted ascending.
std::vector<double> annulus_eigenvalues(const AnnulusSpec& spec, int k_max);

// First nonzero eigenvalue.
double annulus_first_eigenvalue(const AnnulusSpec& spec);

struct AnnulusScanPoint {
    double epsilon;
    double lambda1;
    double normalized; // lambda1 * 2 pi (1+eps)  or  lambda1 * sqrt(pi (1-eps^2))
};

// lambda_1 over an epsilon grid with the chosen normalization. The perimeter
// curve peaks near eps = 0.1467; the area curve decreases monotonically from
// sqrt(pi).
std::vector<AnnulusScanPoint> annulus_normalized_scan(Normalization norm,
                                                      const std::vector<double>& eps_grid);

} // namespace steklov
