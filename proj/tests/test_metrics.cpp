#include <doctest.h>

#include <cmath>
#include <random>

#include "gemfrft/metrics.hpp"
#include "gemfrft/signals.hpp"
#include "gemfrft/util.hpp"

using namespace gemfrft;

namespace {

PulseSignal test_mode(int n = 0) {
    HGParams p;
    p.n = n;
    p.sigma_t = 1.0;
    p.mode_volume = std::max(1, n);
    return hg_mode(p, TimeGrid(-10.0, 0.02, 1001));
}

} // namespace

TEST_CASE("identity triple gives unit metrics") {
    auto s = test_mode();
    auto ms = metrics(s, s, s);
    CHECK(ms.efficiency == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ms.conditional_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ms.eigenphase) < 1e-12);
}

TEST_CASE("scaled and phase-shifted output") {
    auto target = test_mode();
    auto out = target;
    scale_signal(out, 0.5 * std::exp(cplx(0.0, pi / 3.0)));
    auto ms = metrics(out, target, target);
    CHECK(ms.efficiency == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ms.conditional_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ms.eigenphase == doctest::Approx(pi / 3.0).epsilon(1e-12));
}

TEST_CASE("conditional fidelity is invariant under complex scaling of the output") {
    auto target = test_mode(2);
    auto base = test_mode(1);
    // make an imperfect output: mix of target and another mode
    PulseSignal out = target;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.amplitude[i] = 0.9 * target.amplitude[i] + 0.3 * base.amplitude[i];
    const double f0 = metrics(out, target, target).conditional_fidelity;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int k = 0; k < 5; ++k) {
        PulseSignal scaled = out;
        scale_signal(scaled, u(rng) * std::exp(cplx(0.0, u(rng))));
        CHECK(metrics(scaled, target, target).conditional_fidelity ==
              doctest::Approx(f0).epsilon(1e-10));
    }
}

TEST_CASE("factorization invariant: fid * eff = |overlap|^2 / (E_in E_tgt)") {
    auto input = test_mode(0);
    auto target = test_mode(2);
    PulseSignal out = target;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.amplitude[i] = 0.4 * target.amplitude[i] + 0.1 * input.amplitude[i];
    auto ms = metrics(out, input, target);
    const double lhs = ms.conditional_fidelity * ms.efficiency;
    const double rhs = std::norm(ms.overlap) / (signal_energy(input) * signal_energy(target));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("zero output gives zero efficiency; zero input is an error") {
    auto s = test_mode();
    PulseSignal zero = s;
    for (auto& a : zero.amplitude) a = 0.0;
    auto ms = metrics(zero, s, s);
    CHECK(ms.efficiency == 0.0);
    CHECK(ms.conditional_fidelity == 0.0);
    CHECK_THROWS_AS(metrics(s, zero, s), invalid_parameter);
}

TEST_CASE("shifted-window target is resampled onto the output grid") {
    auto target = test_mode();
    // same dt, window offset by a non-integer number of samples
    TimeGrid shifted(-10.0 + 0.5 * target.grid.dt, target.grid.dt, target.grid.n_samples);
    std::vector<cplx> a(shifted.n_samples);
    for (std::size_t i = 0; i < shifted.n_samples; ++i) {
        const double t = shifted.t(i);
        a[i] = std::exp(-0.5 * t * t) / std::pow(pi, 0.25);
    }
    PulseSignal out(shifted, std::move(a));
    auto ms = metrics(out, target, target);
    CHECK(ms.conditional_fidelity > 0.9999);
}
