#include <doctest.h>

#include <cmath>
#include <complex>

#include "gemfrft/fft.hpp"
#include "gemfrft/signals.hpp"
#include "gemfrft/util.hpp"

using namespace gemfrft;

namespace {

TimeGrid centered_grid(double half_span, double dt) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_span / dt)) + 1;
    return TimeGrid(-half_span, dt, n);
}

} // namespace

TEST_CASE("hg_mode ground state is the unit-norm Gaussian") {
    HGParams p;
    p.n = 0;
    p.sigma_t = 1.0;
    p.center = 0.0;
    auto s = hg_mode(p, centered_grid(8.0, 0.02));
    CHECK(std::abs(signal_energy(s) - 1.0) < 1e-10);
    for (std::size_t i = 0; i < s.size(); i += 37) {
        const double t = s.grid.t(i);
        const double expect = std::exp(-0.5 * t * t) / std::pow(pi, 0.25);
        CHECK(std::abs(s.amplitude[i].real() - expect) < 1e-6);
        CHECK(s.amplitude[i].imag() == 0.0);
    }
}

TEST_CASE("hg_mode orthonormality up to n = 10") {
    const double sigma = 1.0;
    TimeGrid grid = centered_grid(5.0 * sigma * std::sqrt(21.0) + 3.0, sigma / 50.0);
    std::vector<PulseSignal> modes;
    for (int n = 0; n <= 10; ++n) {
        HGParams p;
        p.n = n;
        p.sigma_t = sigma;
        p.mode_volume = 10;
        // mode_volume invariant: allow n = 10 via mode_volume = 10
        if (n > p.mode_volume) p.mode_volume = n;
        modes.push_back(hg_mode(p, grid));
    }
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= i; ++j) {
            const auto ov = inner_product(modes[i], modes[j]);
            const double expect = (i == j) ? 1.0 : 0.0;
            CHECK(std::abs(ov - cplx(expect, 0.0)) < 1e-8);
        }
}

TEST_CASE("hermite recurrence holds pointwise") {
    for (double x : {-3.7, -0.9, 0.0, 0.4, 2.2, 5.1}) {
        auto h = hermite_functions(11, x);
        for (int n = 1; n <= 10; ++n) {
            const double rhs = std::sqrt(2.0 / (n + 1.0)) * x * h[n] -
                               std::sqrt(double(n) / (n + 1.0)) * h[n - 1];
            CHECK(std::abs(h[n + 1] - rhs) < 1e-10);
        }
    }
}

TEST_CASE("mode_volume_scale matches the 99.9% extent definition") {
    const double sigma = mode_volume_scale(1, 10.0, 0.8);
    HGParams p;
    p.n = 1;
    p.sigma_t = sigma;
    auto s = hg_mode(p, centered_grid(12.0, 0.002));
    const auto ext = energy_extent(s, 0.999);
    CHECK(ext.width() == doctest::Approx(8.0).epsilon(0.005));
}

TEST_CASE("mode_volume_scale scales linearly with T_i and shrinks with m") {
    const double s1 = mode_volume_scale(3, 10.0);
    const double s2 = mode_volume_scale(3, 20.0);
    CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-12));

    // Monotone decreasing in m; ratio close to sqrt(3/21) between m=1, m=10.
    double prev = mode_volume_scale(1, 10.0);
    for (int m = 2; m <= 10; ++m) {
        const double cur = mode_volume_scale(m, 10.0);
        CHECK(cur < prev);
        prev = cur;
    }
    const double ratio = mode_volume_scale(10, 10.0) / mode_volume_scale(1, 10.0);
    CHECK(ratio == doctest::Approx(std::sqrt(3.0 / 21.0)).epsilon(0.15));
}

TEST_CASE("HG_10 at mode volume 10 fits the storage window") {
    const double sigma = mode_volume_scale(10, 10.0, 0.8);
    HGParams p;
    p.n = 10;
    p.sigma_t = sigma;
    p.mode_volume = 10;
    auto s = hg_mode(p, centered_grid(8.0, 0.002));
    // 1/e^2 intensity extent from the generated samples.
    double peak = 0.0;
    for (const auto& a : s.amplitude) peak = std::max(peak, std::norm(a));
    std::size_t lo = 0, hi = s.size() - 1;
    while (lo < s.size() && std::norm(s.amplitude[lo]) < peak * std::exp(-2.0)) ++lo;
    while (hi > 0 && std::norm(s.amplitude[hi]) < peak * std::exp(-2.0)) --hi;
    CHECK(s.grid.t(hi) - s.grid.t(lo) <= 10.0);
}

TEST_CASE("gaussian_pair degenerate and resolved cases") {
    auto single = gaussian_pair(0.0, 0.7, centered_grid(8.0, 0.01));
    CHECK(std::abs(signal_energy(single) - 1.0) < 1e-10);

    auto pair = gaussian_pair(4.0 * 0.7, 0.7, centered_grid(10.0, 0.01));
    CHECK(std::abs(signal_energy(pair) - 1.0) < 1e-10);
    // two resolved intensity peaks: a dip at the midpoint
    const std::size_t mid = pair.size() / 2;
    double peak = 0.0;
    for (const auto& a : pair.amplitude) peak = std::max(peak, std::norm(a));
    CHECK(std::norm(pair.amplitude[mid]) < 0.3 * peak);
}

TEST_CASE("gaussian_pair spectrum shows fringes spaced 1/separation") {
    const double sep = 2.5, sigma = 0.45, dt = 0.01;
    auto pair = gaussian_pair(sep, sigma, centered_grid(10.0, dt));
    auto spec = fft(pair.amplitude);
    // |spectrum|^2 fringe minima spacing in f is 1/sep; locate the first
    // two minima above f = 0.
    const std::size_t n = spec.size();
    const double df = 1.0 / (double(n) * dt);
    std::vector<double> mag(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) mag[k] = std::norm(spec[k]);
    std::vector<double> minima;
    for (std::size_t k = 1; k + 1 < n / 8; ++k)
        if (mag[k] < mag[k - 1] && mag[k] < mag[k + 1]) minima.push_back(k * df);
    REQUIRE(minima.size() >= 2);
    const double spacing = minima[1] - minima[0];
    CHECK(spacing == doctest::Approx(1.0 / sep).epsilon(0.05));
}

TEST_CASE("matched bandwidth contains the 99.9% spectral extent") {
    const double t_i = 10.0, kappa = 0.8;
    const double sigma = mode_volume_scale(4, t_i, kappa);
    const double b = matched_bandwidth_mhz(sigma, t_i);
    // spectral extent of HG_4: 2 a_4 / (2 pi sigma) MHz; fill factor kappa.
    const double a4 = hg_energy_halfwidth(4);
    const double extent_mhz = 2.0 * a4 / (two_pi * sigma);
    CHECK(extent_mhz < b);
    CHECK(extent_mhz == doctest::Approx(kappa * b).epsilon(1e-6));
}

TEST_CASE("signal generator error paths") {
    HGParams p;
    p.n = 3;
    p.sigma_t = 1.0;
    p.mode_volume = 3;
    CHECK_THROWS_AS(hg_mode(p, centered_grid(2.0, 0.01)), truncation_error);
    p.sigma_t = -1.0;
    CHECK_THROWS_AS(hg_mode(p, centered_grid(20.0, 0.01)), invalid_parameter);
    CHECK_THROWS_AS(gaussian_pair(30.0, 0.5, centered_grid(8.0, 0.01)), truncation_error);
    CHECK_THROWS_AS(mode_volume_scale(0, 10.0), invalid_parameter);
}
