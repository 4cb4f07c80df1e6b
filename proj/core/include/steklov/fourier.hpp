#pragma once

#include <complex>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

using cplx = std::complex<double>;

// Finite bilateral Fourier series sum_{|k| <= K} c_k w^k on the unit circle
// w = e^{i theta}. K is the truncation half-width; coefficients outside
// [-K, K] are identically zero.
class FourierSeries {
public:
    FourierSeries() : half_width_(0), coeffs_(1, cplx{0.0, 0.0}) {}

    explicit FourierSeries(int half_width)
        : half_width_(half_width), coeffs_(2 * half_width + 1, cplx{0.0, 0.0}) {
        if (half_width < 0) throw input_error("FourierSeries: negative half-width");
    }

    // Series with coefficients c_0..c_K (all negative indices zero).
    static FourierSeries analytic(const std::vector<cplx>& nonneg_coeffs);

    int half_width() const { return half_width_; }

    cplx coeff(int k) const {
        if (k < -half_width_ || k > half_width_) return {0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(k + half_width_)];
    }

    void set_coeff(int k, cplx value) {
        if (k < -half_width_ || k > half_width_)
            throw input_error("FourierSeries::set_coeff: index outside half-width");
        coeffs_[static_cast<std::size_t>(k + half_width_)] = value;
    }

    // c_{-k} = conj(c_k) for all k, within tol (grid samples are real).
    bool is_real_valued(double tol = 1e-12) const;

    // c_k = 0 for k < 0, within tol (boundary trace of a function analytic in |w| < 1).
    bool is_analytic(double tol = 1e-12) const;

    double max_abs_coeff() const;

    // Same series re-truncated to the given half-width (drops outside coefficients).
    FourierSeries truncated(int half_width) const;

    FourierSeries& operator+=(const FourierSeries& other);
    FourierSeries& operator*=(cplx scalar);

private:
    int half_width_;
    std::vector<cplx> coeffs_; // index k + half_width_
};

FourierSeries operator+(FourierSeries a, const FourierSeries& b);
FourierSeries operator*(cplx scalar, FourierSeries s);

// Samples v_j = v(theta_j) at theta_j = 2 pi j / M, j = 0..M-1.
struct GridSamples {
    std::vector<cplx> values;

    int size() const { return static_cast<int>(values.size()); }
    double theta(int j) const;
    std::vector<double> real_values() const;
};

bool is_power_of_two(int m);

// Smallest power of two >= n.
int next_power_of_two(int n);

// Default grid length for working with series of the given half-width:
// 2*(2K+2) rounded up to a power of two.
int default_grid_size(int half_width);

// Evaluate the series on an M-point uniform grid. Requires M >= 2K+1 and M a
// power of two so that from_grid can invert it losslessly.
GridSamples to_grid(const FourierSeries& s, int grid_size);

// Coefficients c_k, |k| <= half_width, of the trigonometric interpolant
// through the samples. Inverse of to_grid on band-limited input; modes with
// |k| > half_width are discarded. Requires 2*half_width + 1 <= M.
FourierSeries from_grid(const GridSamples& g, int half_width);

// Pointwise product computed on a zero-padded grid large enough that the
// convolution is alias-free; result half-width is the sum of the inputs'.
FourierSeries product(const FourierSeries& a, const FourierSeries& b);

// d/dw: c'_{k-1} = k c_k.
FourierSeries derivative_wrt_omega(const FourierSeries& s);

// Periodic Hilbert transform of a real-valued series, with the sign fixed so
// that s + i H[s] has nonnegative-index modes only (boundary trace of a
// function analytic in the disk). H[cos] = sin; H[const] = 0.
FourierSeries hilbert_transform(const FourierSeries& s);

// Series of the analytic function whose real part has the given boundary
// samples: Re + i H[Re], modes 0..half_width.
FourierSeries analytic_completion(const std::vector<double>& samples, int half_width);

// Exponential spectral filter c_k *= exp(-strength (|k|/K)^order), followed by
// flushing coefficients with |c_k| < floor to exactly zero.
FourierSeries fourier_filter(const FourierSeries& s, int order, double strength,
                             double floor = 1e-14);

// Centered periodic moving average over a closed-curve grid. Span must be odd.
std::vector<double> moving_average(const std::vector<double>& values, int span);

namespace detail {
// Evaluate on an arbitrary grid length (indices folded mod M); exact for any
// half-width, but not invertible unless M >= 2K+1.
GridSamples sample_on_grid(const FourierSeries& s, int grid_size);
} // namespace detail

} // namespace steklov
