#include "steklov/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace steklov {

namespace {

// FFTW plan creation is not thread-safe; execution with new-array interface
// is. Plans are cached per size and created UNALIGNED so they can execute on
// plain std::vector storage.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void forward(std::vector<cplx>& inout) { run(inout, FFTW_FORWARD); }
    void backward(std::vector<cplx>& inout) { run(inout, FFTW_BACKWARD); }

private:
    void run(std::vector<cplx>& inout, int sign) {
        const int m = static_cast<int>(inout.size());
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto& entry = sign == FFTW_FORWARD ? forward_[m] : backward_[m];
            if (!entry) {
                std::vector<cplx> probe(static_cast<std::size_t>(m));
                entry = fftw_plan_dft_1d(
                    m, reinterpret_cast<fftw_complex*>(probe.data()),
                    reinterpret_cast<fftw_complex*>(probe.data()), sign,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
            }
            plan = entry;
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(inout.data()),
                         reinterpret_cast<fftw_complex*>(inout.data()));
    }

    std::mutex mutex_;
    std::map<int, fftw_plan> forward_;
    std::map<int, fftw_plan> backward_;
};

} // namespace

FourierSeries FourierSeries::analytic(const std::vector<cplx>& nonneg_coeffs) {
    const int k_max = std::max<int>(0, static_cast<int>(nonneg_coeffs.size()) - 1);
    FourierSeries s(k_max);
    for (int k = 0; k < static_cast<int>(nonneg_coeffs.size()); ++k)
        s.set_coeff(k, nonneg_coeffs[static_cast<std::size_t>(k)]);
    return s;
}

bool FourierSeries::is_real_valued(double tol) const {
    for (int k = 0; k <= half_width_; ++k)
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
    return true;
}

bool FourierSeries::is_analytic(double tol) const {
    for (int k = 1; k <= half_width_; ++k)
        if (std::abs(coeff(-k)) > tol) return false;
    return true;
}

double FourierSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

FourierSeries FourierSeries::truncated(int half_width) const {
    FourierSeries out(half_width);
    const int keep = std::min(half_width, half_width_);
    for (int k = -keep; k <= keep; ++k) out.set_coeff(k, coeff(k));
    return out;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& other) {
    if (other.half_width_ > half_width_) {
        FourierSeries grown = truncated(other.half_width_);
        *this = grown;
    }
    for (int k = -other.half_width_; k <= other.half_width_; ++k)
        set_coeff(k, coeff(k) + other.coeff(k));
    return *this;
}

FourierSeries& FourierSeries::operator*=(cplx scalar) {
    for (cplx& c : coeffs_) c *= scalar;
    return *this;
}

FourierSeries operator+(FourierSeries a, const FourierSeries& b) {
    a += b;
    return a;
}

FourierSeries operator*(cplx scalar, FourierSeries s) {
    s *= scalar;
    return s;
}

double GridSamples::theta(int j) const {
    return 2.0 * std::numbers::pi * j / size();
}

std::vector<double> GridSamples::real_values() const {
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[j].real();
    return out;
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

int next_power_of_two(int n) {
    int m = 1;
    while (m < n) m *= 2;
    return m;
}

int default_grid_size(int half_width) {
    return next_power_of_two(2 * (2 * half_width + 2));
}

namespace detail {

GridSamples sample_on_grid(const FourierSeries& s, int grid_size) {
    if (grid_size < 1) throw input_error("sample_on_grid: grid size must be positive");
    std::vector<cplx> bins(static_cast<std::size_t>(grid_size), cplx{0.0, 0.0});
    const int k_max = s.half_width();
    for (int k = -k_max; k <= k_max; ++k) {
        const cplx c = s.coeff(k);
        if (c == cplx{0.0, 0.0}) continue;
        int bin = ((k % grid_size) + grid_size) % grid_size;
        bins[static_cast<std::size_t>(bin)] += c;
    }
    FftPlans::instance().backward(bins); // sum_m X_m e^{+2 pi i j m / M}
    return GridSamples{std::move(bins)};
}

} // namespace detail

GridSamples to_grid(const FourierSeries& s, int grid_size) {
    if (!is_power_of_two(grid_size))
        throw input_error("to_grid: grid size must be a power of two");
    if (grid_size < 2 * s.half_width() + 1)
        throw input_error("to_grid: grid too small for half-width, samples would alias");
    return detail::sample_on_grid(s, grid_size);
}

FourierSeries from_grid(const GridSamples& g, int half_width) {
    const int m = g.size();
    if (2 * half_width + 1 > m)
        throw input_error("from_grid: half-width too large for grid length");
    std::vector<cplx> bins = g.values;
    FftPlans::instance().forward(bins);
    FourierSeries s(half_width);
    const double scale = 1.0 / m;
    for (int k = -half_width; k <= half_width; ++k) {
        int bin = ((k % m) + m) % m;
        s.set_coeff(k, scale * bins[static_cast<std::size_t>(bin)]);
    }
    return s;
}

FourierSeries product(const FourierSeries& a, const FourierSeries& b) {
    const int out_half_width = a.half_width() + b.half_width();
    const int m = next_power_of_two(2 * out_half_width + 1);
    GridSamples ga = detail::sample_on_grid(a, m);
    GridSamples gb = detail::sample_on_grid(b, m);
    for (int j = 0; j < m; ++j)
        ga.values[static_cast<std::size_t>(j)] *= gb.values[static_cast<std::size_t>(j)];
    return from_grid(ga, out_half_width);
}

FourierSeries derivative_wrt_omega(const FourierSeries& s) {
    FourierSeries out(s.half_width() + 1);
    for (int k = -s.half_width(); k <= s.half_width(); ++k)
        out.set_coeff(k - 1, static_cast<double>(k) * s.coeff(k));
    return out;
}

FourierSeries hilbert_transform(const FourierSeries& s) {
    if (!s.is_real_valued())
        throw input_error("hilbert_transform: series must be real-valued");
    FourierSeries out(s.half_width());
    const cplx minus_i{0.0, -1.0};
    for (int k = 1; k <= s.half_width(); ++k) {
        out.set_coeff(k, minus_i * s.coeff(k));
        out.set_coeff(-k, -minus_i * s.coeff(-k));
    }
    return out;
}

FourierSeries analytic_completion(const std::vector<double>& samples, int half_width) {
    GridSamples g;
    g.values.reserve(samples.size());
    for (double v : samples) g.values.emplace_back(v, 0.0);
    FourierSeries rs = from_grid(g, half_width);
    // Re + iH folds the conjugate-symmetric halves onto nonnegative modes.
    FourierSeries out(half_width);
    out.set_coeff(0, cplx{rs.coeff(0).real(), 0.0});
    for (int k = 1; k <= half_width; ++k) out.set_coeff(k, 2.0 * rs.coeff(k));
    return out;
}

FourierSeries fourier_filter(const FourierSeries& s, int order, double strength,
                             double floor) {
    if (strength <= 0.0) throw input_error("fourier_filter: strength must be positive");
    const int k_max = s.half_width();
    FourierSeries out(k_max);
    for (int k = -k_max; k <= k_max; ++k) {
        double damp = 1.0;
        if (k != 0 && k_max > 0) {
            const double ratio = std::abs(static_cast<double>(k)) / k_max;
            damp = std::exp(-strength * std::pow(ratio, order));
        }
        cplx c = damp * s.coeff(k);
        if (std::abs(c) < floor) c = {0.0, 0.0};
        out.set_coeff(k, c);
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& values, int span) {
    const int n = static_cast<int>(values.size());
    if (span % 2 == 0) throw input_error("moving_average: span must be odd");
    if (span < 1 || span > n) throw input_error("moving_average: span out of range");
    const int half = span / 2;
    std::vector<double> out(values.size());
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int d = -half; d <= half; ++d)
            acc += values[static_cast<std::size_t>(((j + d) % n + n) % n)];
        out[static_cast<std::size_t>(j)] = acc / span;
    }
    return out;
}

} // namespace steklov
