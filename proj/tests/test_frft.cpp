#include <doctest.h>

#include <cmath>
#include <random>

#include "gemfrft/frft.hpp"
#include "gemfrft/signals.hpp"
#include "gemfrft/util.hpp"

using namespace gemfrft;

namespace {

TimeGrid matched_grid(double half_span = 14.0, double dt = 0.04) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_span / dt)) + 1;
    return TimeGrid(-half_span, dt, n);
}

PulseSignal hg(int n, const TimeGrid& g, double sigma = 1.0) {
    HGParams p;
    p.n = n;
    p.sigma_t = sigma;
    p.mode_volume = std::max(1, n);
    return hg_mode(p, g);
}

// Band-limited random signal: a seeded HG superposition.
PulseSignal random_signal(unsigned seed, const TimeGrid& g) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PulseSignal acc(g, std::vector<cplx>(g.n_samples, cplx(0.0, 0.0)));
    for (int k = 0; k <= 6; ++k) {
        const cplx c(u(rng), u(rng));
        auto mode = hg(k, g);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.amplitude[i] += c * mode.amplitude[i];
    }
    normalize_signal(acc);
    return acc;
}

} // namespace

TEST_CASE("alpha = 0 is the identity") {
    auto g = matched_grid();
    auto s = random_signal(11, g);
    FrftSpec fs;
    fs.alpha = 0.0;
    auto out = frft_oracle(s, fs);
    CHECK(l2_distance(out, s) < 1e-12);
}

TEST_CASE("alpha = pi is parity") {
    auto g = matched_grid();
    auto s = random_signal(12, g);
    FrftSpec fs;
    fs.alpha = pi;
    auto out = frft_oracle(s, fs);
    for (std::size_t i = 0; i < s.size(); i += 41)
        CHECK(std::abs(out.amplitude[i] - s.amplitude[s.size() - 1 - i]) < 1e-12);
}

TEST_CASE("pi/2 on the matched Gaussian returns the same Gaussian") {
    auto g = matched_grid();
    auto s = hg(0, g);
    FrftSpec fs;
    fs.alpha = pi / 2.0;
    auto out = frft_oracle(s, fs);
    CHECK(l2_distance(out, s) < 1e-8);
}

TEST_CASE("pi/2 agrees with a directly-evaluated discrete Fourier transform") {
    // F_{pi/2} f(x) = (1/sqrt(2 pi)) integral f(x') e^{-i x x'} dx'; compare
    // the oracle to the literal Riemann sum on the same grid.
    auto g = matched_grid(12.0, 0.05);
    auto s = random_signal(13, g);
    FrftSpec fs;
    fs.alpha = pi / 2.0;
    auto out = frft_oracle(s, fs, FrftPath::chirp_fft);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); k += 17) {
        const double xk = g.t(k);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double xj = g.t(j);
            acc += s.amplitude[j] * std::exp(cplx(0.0, -xk * xj));
        }
        acc *= g.dt / std::sqrt(two_pi);
        worst = std::max(worst, std::abs(acc - out.amplitude[k]));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("direct quadrature and chirp-FFT paths agree") {
    auto g = matched_grid(12.0, 0.05);
    auto s = random_signal(14, g);
    for (double alpha : {pi / 6.0, pi / 4.0, 2.0, 2.8, -pi / 3.0}) {
        FrftSpec fs;
        fs.alpha = alpha;
        auto a = frft_oracle(s, fs, FrftPath::direct);
        auto b = frft_oracle(s, fs, FrftPath::chirp_fft);
        CHECK(l2_distance(a, b) < 1e-6);
    }
}

TEST_CASE("unitarity across the sweep range") {
    auto g = matched_grid();
    auto s = random_signal(15, g);
    for (int k = 1; k <= 11; ++k) {
        FrftSpec fs;
        fs.alpha = k * pi / 12.0;
        if (std::abs(std::sin(fs.alpha)) < 1e-6) continue;
        auto out = frft_oracle(s, fs);
        CHECK(std::abs(signal_norm(out) - 1.0) < 1e-8);
    }
}

TEST_CASE("composition: two quarter rotations equal one half rotation") {
    auto g = matched_grid();
    auto s = random_signal(16, g);
    FrftSpec q;
    q.alpha = pi / 4.0;
    auto twice = frft_oracle(frft_oracle(s, q), q);
    FrftSpec h;
    h.alpha = pi / 2.0;
    auto once = frft_oracle(s, h);
    CHECK(l2_distance(twice, once) < 1e-6);
}

TEST_CASE("additivity for random angle pairs") {
    auto g = matched_grid();
    auto s = random_signal(17, g);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(pi / 12.0, 11.0 * pi / 24.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = u(rng), b = u(rng);
        FrftSpec fa, fb, fab;
        fa.alpha = a;
        fb.alpha = b;
        fab.alpha = a + b;
        auto composed = frft_oracle(frft_oracle(s, fa), fb);
        auto direct = frft_oracle(s, fab);
        CHECK(l2_distance(composed, direct) < 1e-6);
    }
}

TEST_CASE("Hermite-Gauss eigenrelation fixes the phase sign") {
    // F_alpha HG_n = exp(frft_eigenphase_sign * i n alpha) HG_n.
    auto g = matched_grid(16.0, 0.03);
    const double alpha = pi / 4.0;
    for (int n = 0; n <= 10; ++n) {
        auto mode = hg(n, g);
        FrftSpec fs;
        fs.alpha = alpha;
        auto out = frft_oracle(mode, fs);
        const cplx ov = inner_product(out, mode);
        CHECK(std::abs(std::abs(ov) - 1.0) < 1e-7);
        const double expected = wrap_pi(frft_eigenphase_sign * n * alpha);
        CHECK(std::abs(wrap_pi(std::arg(ov) - expected)) < 1e-6);
    }
}

TEST_CASE("scale mapping moves between physical grids") {
    // A Gaussian of width sigma transformed at matched scale sigma comes
    // back unchanged around a new centre.
    const double sigma = 1.7;
    TimeGrid g(-14.0 * sigma, 0.05 * sigma, 561);
    auto s = hg(0, g, sigma);
    FrftSpec fs;
    fs.alpha = pi / 2.0;
    fs.t_scale_in = sigma;
    fs.t_scale_out = sigma;
    fs.center_in = 0.0;
    fs.center_out = 100.0;
    auto out = frft_oracle(s, fs);
    CHECK(out.grid.t_start == doctest::Approx(100.0 - 14.0 * sigma));
    CHECK(std::abs(signal_norm(out) - 1.0) < 1e-8);
    // peak sits at the new centre
    std::size_t imax = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (std::abs(out.amplitude[i]) > std::abs(out.amplitude[imax])) imax = i;
    CHECK(std::abs(out.grid.t(imax) - 100.0) < 3.0 * out.grid.dt);
}

TEST_CASE("undersampled chirp is rejected") {
    // Coarse grid, alpha near 0 without being snapped: cot(alpha) blows up.
    TimeGrid g(-20.0, 0.5, 81);
    auto s = hg(0, g, 2.0);
    FrftSpec fs;
    fs.alpha = 0.02;
    CHECK_THROWS_AS(frft_oracle(s, fs), resolution_error);
}
