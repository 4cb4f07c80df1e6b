#include "steklov/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace steklov {

ConformalShape::ConformalShape(std::vector<cplx> coeffs)
    : series_(FourierSeries::analytic(coeffs)), derivative_(derivative_wrt_omega(series_)) {
    if (coeffs.empty()) throw input_error("ConformalShape: empty coefficient list");
}

ConformalShape ConformalShape::from_series(const FourierSeries& s, double tol) {
    if (!s.is_analytic(tol))
        throw input_error("ConformalShape: series has negative-index coefficients");
    std::vector<cplx> coeffs(static_cast<std::size_t>(s.half_width()) + 1);
    for (int k = 0; k <= s.half_width(); ++k) coeffs[static_cast<std::size_t>(k)] = s.coeff(k);
    return ConformalShape(std::move(coeffs));
}

ConformalShape ConformalShape::truncated(int truncation) const {
    std::vector<cplx> coeffs(static_cast<std::size_t>(truncation) + 1, cplx{0.0, 0.0});
    for (int k = 0; k <= std::min(truncation, this->truncation()); ++k)
        coeffs[static_cast<std::size_t>(k)] = coeff(k);
    return ConformalShape(std::move(coeffs));
}

ConformalShape ConformalShape::scaled(cplx factor) const {
    std::vector<cplx> coeffs(static_cast<std::size_t>(truncation()) + 1);
    for (int k = 0; k <= truncation(); ++k)
        coeffs[static_cast<std::size_t>(k)] = factor * coeff(k);
    return ConformalShape(std::move(coeffs));
}

bool ConformalShape::has_real_coefficients(double tol) const {
    for (int k = 0; k <= truncation(); ++k)
        if (std::abs(coeff(k).imag()) > tol) return false;
    return true;
}

double ConformalShape::min_boundary_derivative() const {
    const int m = 4 * default_grid_size(truncation());
    GridSamples fw = detail::sample_on_grid(derivative_, m);
    double lo = std::abs(fw.values[0]);
    for (const cplx& v : fw.values) lo = std::min(lo, std::abs(v));
    return lo;
}

void ConformalShape::require_nondegenerate() const {
    if (degenerate())
        throw degenerate_shape_error("shape degenerate: |f_w| below threshold on boundary");
}

FourierSeries boundary_modulus(const ConformalShape& shape, int half_width) {
    shape.require_nondegenerate();
    if (half_width < 0) half_width = 2 * shape.truncation();
    // The grid must resolve |f_w| itself, not only the requested output band.
    const int m = default_grid_size(std::max(half_width, 2 * shape.truncation()));
    GridSamples fw = detail::sample_on_grid(shape.map_derivative(), m);
    for (cplx& v : fw.values) v = cplx{std::abs(v), 0.0};
    return from_grid(fw, half_width);
}

std::vector<double> boundary_speed(const ConformalShape& shape, int grid_size) {
    GridSamples fw = detail::sample_on_grid(shape.map_derivative(), grid_size);
    std::vector<double> out(fw.values.size());
    for (std::size_t j = 0; j < fw.values.size(); ++j) out[j] = std::abs(fw.values[j]);
    return out;
}

std::vector<double> curvature(const ConformalShape& shape, int grid_size) {
    shape.require_nondegenerate();
    const int k_max = shape.truncation();
    FourierSeries wfw(k_max);      // w f_w = sum k a_k w^k
    FourierSeries wwfww(k_max);    // w (w f_w)_w = sum k^2 a_k w^k
    for (int k = 1; k <= k_max; ++k) {
        wfw.set_coeff(k, static_cast<double>(k) * shape.coeff(k));
        wwfww.set_coeff(k, static_cast<double>(k) * static_cast<double>(k) * shape.coeff(k));
    }
    GridSamples t = detail::sample_on_grid(wfw, grid_size);
    GridSamples tt = detail::sample_on_grid(wwfww, grid_size);
    std::vector<double> kappa(t.values.size());
    for (std::size_t j = 0; j < t.values.size(); ++j) {
        const double speed = std::abs(t.values[j]);
        kappa[j] = (std::conj(t.values[j]) * tt.values[j]).real() / (speed * speed * speed);
    }
    return kappa;
}

double area(const ConformalShape& shape) {
    double acc = 0.0;
    for (int k = 1; k <= shape.truncation(); ++k)
        acc += k * std::norm(shape.coeff(k));
    const double result = std::numbers::pi * acc;
    if (result <= 0.0)
        throw degenerate_shape_error("area: nonpositive enclosed area");
    return result;
}

double perimeter(const ConformalShape& shape) {
    return 2.0 * std::numbers::pi * boundary_modulus(shape, 0).coeff(0).real();
}

std::vector<cplx> boundary_curve(const ConformalShape& shape, int grid_size) {
    if (grid_size < 1) throw input_error("boundary_curve: grid size must be positive");
    std::vector<cplx> out(static_cast<std::size_t>(grid_size));
    // Horner in w; grid lengths here are plot resolutions, not FFT sizes.
    for (int j = 0; j < grid_size; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / grid_size;
        const cplx w = std::polar(1.0, theta);
        cplx acc{0.0, 0.0};
        for (int k = shape.truncation(); k >= 0; --k) acc = acc * w + shape.coeff(k);
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

double crowding_diagnostic(const ConformalShape& shape) {
    const int m = 4 * default_grid_size(shape.truncation());
    GridSamples fw = detail::sample_on_grid(shape.map_derivative(), m);
    double lo = std::abs(fw.values[0]);
    double hi = lo;
    for (const cplx& v : fw.values) {
        const double a = std::abs(v);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return hi / lo;
}

} // namespace steklov
