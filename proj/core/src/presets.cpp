#include "steklov/presets.hpp"

#include <cmath>
#include <numbers>

namespace steklov {

ConformalShape preset_disk() { return ConformalShape({{0.0, 0.0}, {1.0, 0.0}}); }

ConformalShape preset_two_fold() {
    return ConformalShape({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.05, 0.0}});
}

ConformalShape preset_two_fold_fat() {
    return ConformalShape({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}});
}

ConformalShape preset_five_fold() {
    return ConformalShape(
        {{8.0, 0.0}, {5.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}});
}

CassiniShape preset_cassini(double alpha, int truncation) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw input_error("preset_cassini: alpha must lie in (0, 1)");
    if (truncation < 1) throw input_error("preset_cassini: truncation must be positive");

    const int m = std::max(4096, 8 * next_power_of_two(truncation));
    GridSamples samples;
    samples.values.resize(static_cast<std::size_t>(m));
    const double ap = 1.0 + alpha * alpha;
    const double am = 1.0 - alpha * alpha;
    for (int j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / m;
        const cplx w = std::polar(1.0, theta);
        // 1 + a^2 - (1 - a^2) w^2 stays in the right half plane on |w| = 1,
        // so the principal square root is the analytic branch.
        samples.values[static_cast<std::size_t>(j)] =
            alpha * w * std::sqrt(2.0 / (ap - am * w * w));
    }

    const FourierSeries dense = from_grid(samples, m / 2 - 1);
    double tail = 0.0;
    for (int k = truncation + 1; k <= dense.half_width(); ++k)
        tail = std::max(tail, std::abs(dense.coeff(k)));

    std::vector<cplx> coeffs(static_cast<std::size_t>(truncation) + 1, cplx{0.0, 0.0});
    for (int k = 0; k <= truncation; ++k) coeffs[static_cast<std::size_t>(k)] = dense.coeff(k);
    return {ConformalShape(std::move(coeffs)), tail};
}

std::optional<ConformalShape> preset_by_name(const std::string& name, int cassini_truncation) {
    if (name == "disk") return preset_disk();
    if (name == "two-fold") return preset_two_fold();
    if (name == "two-fold-fat") return preset_two_fold_fat();
    if (name == "five-fold") return preset_five_fold();
    if (name == "cassini") return preset_cassini(0.4, cassini_truncation).shape;
    if (name.rfind("cassini(", 0) == 0 && name.back() == ')') {
        const std::string arg = name.substr(8, name.size() - 9);
        std::size_t used = 0;
        const double alpha = std::stod(arg, &used);
        if (used != arg.size()) throw input_error("preset: bad cassini parameter");
        return preset_cassini(alpha, cassini_truncation).shape;
    }
    return std::nullopt;
}

} // namespace steklov
