#include "steklov/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace steklov {

namespace {

void check_epsilon(const AnnulusSpec& spec) {
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
        throw input_error("annulus: inner radius must lie in (0, 1)");
}

} // namespace

std::vector<double> disk_eigenvalues(int count) {
    if (count < 1) throw input_error("disk_eigenvalues: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (i + 1) / 2;
    return out;
}

double annulus_characteristic(const AnnulusSpec& spec, int k, double x) {
    check_epsilon(spec);
    const double eps = spec.epsilon;
    const double e2k = std::pow(eps, 2 * k);
    const double b = k * ((eps + 1.0) / eps) * ((1.0 + e2k) / (1.0 - e2k));
    return x * x - b * x + static_cast<double>(k) * k / eps;
}

std::pair<double, double> annulus_mode_roots(const AnnulusSpec& spec, int k) {
    check_epsilon(spec);
    if (k < 1) throw input_error("annulus_mode_roots: mode number must be positive");
    const double eps = spec.epsilon;
    const double e2k = std::pow(eps, 2 * k);
    const double b = k * ((eps + 1.0) / eps) * ((1.0 + e2k) / (1.0 - e2k));
    const double c = static_cast<double>(k) * k / eps;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0)
        throw numerical_error("annulus_mode_roots: complex characteristic roots");
    // Product form for the small root avoids cancellation (b > 0 always).
    const double big = 0.5 * (b + std::sqrt(disc));
    const double small = c / big;
    return {small, big};
}

double annulus_radial_eigenvalue(const AnnulusSpec& spec) {
    check_epsilon(spec);
    const double eps = spec.epsilon;
    return (1.0 + eps) / (eps * std::log(1.0 / eps));
}

std::vector<double> annulus_eigenvalues(const AnnulusSpec& spec, int k_max) {
    check_epsilon(spec);
    if (k_max < 1) throw input_error("annulus_eigenvalues: k_max must be positive");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(4 * k_max + 2));
    out.push_back(0.0);
    out.push_back(annulus_radial_eigenvalue(spec));
    for (int k = 1; k <= k_max; ++k) {
        const auto [small, big] = annulus_mode_roots(spec, k);
        out.insert(out.end(), {small, small, big, big});
    }
    std::sort(out.begin(), out.end());
    return out;
}

double annulus_first_eigenvalue(const AnnulusSpec& spec) {
    const double radial = annulus_radial_eigenvalue(spec);
    double lo = radial;
    // Small roots grow with k; scanning the first few modes is enough, but
    // keep a margin for extreme eps.
    for (int k = 1; k <= 8; ++k) lo = std::min(lo, annulus_mode_roots(spec, k).first);
    return lo;
}

std::vector<AnnulusScanPoint> annulus_normalized_scan(Normalization norm,
                                                      const std::vector<double>& eps_grid) {
    std::vector<AnnulusScanPoint> out;
    out.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        AnnulusSpec spec{eps};
        check_epsilon(spec);
        const double lambda1 = annulus_first_eigenvalue(spec);
        double value = lambda1;
        switch (norm) {
            case Normalization::none:
                break;
            case Normalization::perimeter:
                value = lambda1 * 2.0 * std::numbers::pi * (1.0 + eps);
                break;
            case Normalization::area:
                value = lambda1 * std::sqrt(std::numbers::pi * (1.0 - eps * eps));
                break;
        }
        out.push_back({eps, lambda1, value});
    }
    return out;
}

} // namespace steklov
