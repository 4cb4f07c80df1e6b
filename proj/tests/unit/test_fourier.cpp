#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "steklov/fourier.hpp"
#include "support/oracles.hpp"

using namespace steklov;
using doctest::Approx;

namespace {

FourierSeries random_series(std::mt19937& rng, int half_width, bool real_valued) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FourierSeries s(half_width);
    for (int k = 0; k <= half_width; ++k) {
        cplx c{dist(rng), k == 0 ? 0.0 : dist(rng)};
        s.set_coeff(k, c);
        if (k > 0) s.set_coeff(-k, real_valued ? std::conj(c) : cplx{dist(rng), dist(rng)});
    }
    return s;
}

double max_coeff_distance(const FourierSeries& a, const FourierSeries& b) {
    double m = 0.0;
    const int k_max = std::max(a.half_width(), b.half_width());
    for (int k = -k_max; k <= k_max; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
    return m;
}

} // namespace

TEST_CASE("to_grid evaluates elementary series") {
    FourierSeries constant(0);
    constant.set_coeff(0, {1.0, 0.0});
    GridSamples g = to_grid(constant, 4);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(g.values[j] - cplx{1.0, 0.0}) < 1e-15);

    FourierSeries mode(1);
    mode.set_coeff(1, {1.0, 0.0});
    g = to_grid(mode, 4);
    const cplx expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int j = 0; j < 4; ++j) CHECK(std::abs(g.values[j] - expected[j]) < 1e-15);

    FourierSeries cosine(1);
    cosine.set_coeff(1, {1.0, 0.0});
    cosine.set_coeff(-1, {1.0, 0.0});
    g = to_grid(cosine, 8);
    for (int j = 0; j < 8; ++j)
        CHECK(g.values[j].real() == Approx(2.0 * std::cos(g.theta(j))).epsilon(1e-14));
}

TEST_CASE("to_grid rejects undersized or non-power-of-two grids") {
    FourierSeries s(3);
    s.set_coeff(3, {1.0, 0.0});
    CHECK_THROWS_AS(to_grid(s, 4), input_error);
    CHECK_THROWS_AS(to_grid(s, 12), input_error);
    CHECK_NOTHROW(to_grid(s, 8));
}

TEST_CASE("from_grid inverts to_grid on band-limited input") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 1 + trial;
        FourierSeries s = random_series(rng, k, false);
        FourierSeries back = from_grid(to_grid(s, next_power_of_two(4 * k)), k);
        CHECK(max_coeff_distance(s, back) < 1e-14 * std::max(1.0, s.max_abs_coeff()));
    }

    GridSamples ones;
    ones.values.assign(8, {1.0, 0.0});
    FourierSeries s = from_grid(ones, 2);
    CHECK(std::abs(s.coeff(0) - cplx{1.0, 0.0}) < 1e-15);
    for (int k : {-2, -1, 1, 2}) CHECK(std::abs(s.coeff(k)) < 1e-15);

    GridSamples cosg;
    for (int j = 0; j < 8; ++j)
        cosg.values.push_back({2.0 * std::cos(2.0 * std::numbers::pi * j / 8.0), 0.0});
    s = from_grid(cosg, 1);
    CHECK(std::abs(s.coeff(1) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(s.coeff(-1) - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("product: binomial, identity, difference of squares") {
    FourierSeries one_plus_w(1);
    one_plus_w.set_coeff(0, {1.0, 0.0});
    one_plus_w.set_coeff(1, {1.0, 0.0});
    FourierSeries sq = product(one_plus_w, one_plus_w);
    CHECK(std::abs(sq.coeff(0) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(sq.coeff(1) - cplx{2.0, 0.0}) < 1e-14);
    CHECK(std::abs(sq.coeff(2) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(sq.coeff(-1)) < 1e-15);

    std::mt19937 rng(11);
    FourierSeries s = random_series(rng, 5, false);
    FourierSeries unit(0);
    unit.set_coeff(0, {1.0, 0.0});
    CHECK(max_coeff_distance(product(s, unit), s) < 1e-14);

    FourierSeries sum(1), diff(1);
    sum.set_coeff(1, {1.0, 0.0});
    sum.set_coeff(-1, {1.0, 0.0});
    diff.set_coeff(1, {1.0, 0.0});
    diff.set_coeff(-1, {-1.0, 0.0});
    FourierSeries d = product(sum, diff);
    CHECK(std::abs(d.coeff(2) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(d.coeff(-2) - cplx{-1.0, 0.0}) < 1e-14);
    CHECK(std::abs(d.coeff(0)) < 1e-14);
}

TEST_CASE("product matches direct convolution and is commutative/associative") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        FourierSeries a = random_series(rng, 4 + trial, false);
        FourierSeries b = random_series(rng, 3 + trial, false);
        FourierSeries c = random_series(rng, 2, false);
        CHECK(max_coeff_distance(product(a, b), oracles::naive_product(a, b)) < 1e-13);
        CHECK(max_coeff_distance(product(a, b), product(b, a)) < 1e-13);
        CHECK(max_coeff_distance(product(product(a, b), c), product(a, product(b, c))) < 1e-13);
    }
}

TEST_CASE("derivative_wrt_omega") {
    FourierSeries w(1);
    w.set_coeff(1, {1.0, 0.0});
    FourierSeries dw = derivative_wrt_omega(w);
    CHECK(std::abs(dw.coeff(0) - cplx{1.0, 0.0}) < 1e-15);

    // f(w) = w + 0.05 w^3  ->  f_w = 1 + 0.15 w^2
    FourierSeries f(3);
    f.set_coeff(1, {1.0, 0.0});
    f.set_coeff(3, {0.05, 0.0});
    FourierSeries fw = derivative_wrt_omega(f);
    CHECK(std::abs(fw.coeff(0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(fw.coeff(2) - cplx{0.15, 0.0}) < 1e-15);

    FourierSeries constant(0);
    constant.set_coeff(0, {3.25, 0.0});
    CHECK(derivative_wrt_omega(constant).max_abs_coeff() == 0.0);
}

TEST_CASE("derivative obeys the Leibniz rule") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        FourierSeries a = random_series(rng, 4, false);
        FourierSeries b = random_series(rng, 3, false);
        FourierSeries lhs = derivative_wrt_omega(product(a, b));
        FourierSeries rhs = product(derivative_wrt_omega(a), b) +
                            product(a, derivative_wrt_omega(b));
        CHECK(max_coeff_distance(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("hilbert_transform: cos -> sin, matches PV quadrature") {
    FourierSeries cosine(1);
    cosine.set_coeff(1, {0.5, 0.0});
    cosine.set_coeff(-1, {0.5, 0.0});
    FourierSeries h = hilbert_transform(cosine);
    // sin theta = (i/2) w^-1 - (i/2) w
    CHECK(std::abs(h.coeff(1) - cplx{0.0, -0.5}) < 1e-15);
    CHECK(std::abs(h.coeff(-1) - cplx{0.0, 0.5}) < 1e-15);

    for (double theta : {0.3, 1.7, 4.0}) {
        const double quad =
            oracles::pv_hilbert([](double t) { return std::cos(t); }, theta, 10000);
        CHECK(quad == Approx(std::sin(theta)).epsilon(1e-6));
    }
}

TEST_CASE("hilbert_transform of a constant vanishes and non-real input is rejected") {
    FourierSeries constant(0);
    constant.set_coeff(0, {2.5, 0.0});
    CHECK(hilbert_transform(constant).max_abs_coeff() == 0.0);

    FourierSeries bad(1);
    bad.set_coeff(1, {1.0, 0.0}); // coeff(-1) = 0 != conj(coeff(1))
    CHECK_THROWS_AS(hilbert_transform(bad), input_error);
}

TEST_CASE("s + i H[s] is analytic and H is an involution up to the mean") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        FourierSeries s = random_series(rng, 6, true);
        FourierSeries h = hilbert_transform(s);
        FourierSeries analytic = s + cplx{0.0, 1.0} * h;
        CHECK(analytic.is_analytic(1e-12));

        // H[H[s]] = -(s - mean)
        FourierSeries hh = hilbert_transform(h);
        FourierSeries expected = cplx{-1.0, 0.0} * s;
        expected.set_coeff(0, {0.0, 0.0});
        CHECK(max_coeff_distance(hh, expected) < 1e-12);
    }
}

TEST_CASE("analytic_completion reproduces cos -> w and constants") {
    const int m = 16;
    std::vector<double> constant(m, 0.7);
    FourierSeries p = analytic_completion(constant, 4);
    CHECK(std::abs(p.coeff(0) - cplx{0.7, 0.0}) < 1e-15);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(p.coeff(k)) < 1e-15);

    std::vector<double> cosine(m);
    for (int j = 0; j < m; ++j) cosine[j] = std::cos(2.0 * std::numbers::pi * j / m);
    p = analytic_completion(cosine, 4);
    CHECK(std::abs(p.coeff(1) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(p.coeff(0)) < 1e-15);
    CHECK(std::abs(p.coeff(2)) < 1e-15);
}

TEST_CASE("fourier_filter damps, floors, and is idempotent in its zeroing") {
    FourierSeries s(8);
    s.set_coeff(0, {0.9, 0.0});
    s.set_coeff(3, {0.4, 0.2});
    s.set_coeff(8, {1.0, 0.0});
    s.set_coeff(-5, {1e-15, 0.0});

    FourierSeries f = fourier_filter(s, 25, 36.0);
    CHECK(f.coeff(0) == s.coeff(0));     // k = 0 untouched
    CHECK(std::abs(f.coeff(-5)) == 0.0); // below 1e-14 flushed

    FourierSeries twice = fourier_filter(f, 25, 36.0);
    // Applying the floor twice adds nothing new: zeros stay zeros.
    CHECK(std::abs(twice.coeff(-5)) == 0.0);

    // Edge mode damped by exactly e^-36 (floor disabled to observe it).
    FourierSeries raw = fourier_filter(s, 25, 36.0, 0.0);
    CHECK(std::abs(raw.coeff(8)) == Approx(std::exp(-36.0)).epsilon(1e-12));

    const double damp3 = std::exp(-36.0 * std::pow(3.0 / 8.0, 25));
    CHECK(std::abs(f.coeff(3)) == Approx(damp3 * std::abs(s.coeff(3))).epsilon(1e-12));
}

TEST_CASE("moving_average: constants, impulse, span one") {
    std::vector<double> constant(9, 4.2);
    auto out = moving_average(constant, 5);
    for (double v : out) CHECK(v == Approx(4.2));

    std::vector<double> impulse = {0.0, 0.0, 1.0, 0.0, 0.0};
    out = moving_average(impulse, 5);
    for (double v : out) CHECK(v == Approx(0.2));

    std::vector<double> data = {1.0, -2.0, 3.5, 0.25};
    out = moving_average(data, 1);
    CHECK(out == data);

    CHECK_THROWS_AS(moving_average(data, 2), input_error);

    // Periodic wrap: impulse at the seam spreads across both ends.
    std::vector<double> seam = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    out = moving_average(seam, 3);
    CHECK(out[0] == Approx(1.0 / 3.0));
    CHECK(out[5] == Approx(1.0 / 3.0));
    CHECK(out[1] == Approx(1.0 / 3.0));
    CHECK(out[2] == Approx(0.0));
}
