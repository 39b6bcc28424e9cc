#include <doctest.h>

#include <cmath>

#include "gemfrft/signals.hpp"
#include "gemfrft/util.hpp"
#include "gemfrft/wigner.hpp"

using namespace gemfrft;

namespace {

PulseSignal hg(int n, double sigma, double half_span, double dt) {
    HGParams p;
    p.n = n;
    p.sigma_t = sigma;
    p.mode_volume = std::max(1, n);
    const auto ns = static_cast<std::size_t>(std::ceil(2.0 * half_span / dt)) + 1;
    return hg_mode(p, TimeGrid(-half_span, dt, ns));
}

} // namespace

TEST_CASE("Gaussian Wigner map is positive with peak at (center, 0)") {
    auto s = hg(0, 1.0, 12.0, 0.05);
    auto map = wigner(s);
    double peak = 0.0, vmin = 0.0;
    std::size_t pi1 = 0, pi2 = 0;
    for (std::size_t i = 0; i < map.axis1.count; ++i)
        for (std::size_t l = 0; l < map.axis2.count; ++l) {
            const double v = map.at(i, l);
            vmin = std::min(vmin, v);
            if (v > peak) {
                peak = v;
                pi1 = i;
                pi2 = l;
            }
        }
    CHECK(vmin > -1e-9 * peak);
    CHECK(std::abs(map.axis1.value(pi1)) < 0.1);
    CHECK(std::abs(map.axis2.value(pi2)) < 0.05);
}

TEST_CASE("time marginal recovers |E(t)|^2") {
    auto s = hg(2, 1.0, 12.0, 0.05);
    auto map = wigner(s);
    auto marg = map.marginal_axis2();
    double peak = 0.0;
    for (const auto& a : s.amplitude) peak = std::max(peak, std::norm(a));
    for (std::size_t i = 0; i < s.size(); i += 13)
        CHECK(std::abs(marg[i] - std::norm(s.amplitude[i])) < 1e-6 * peak);
}

TEST_CASE("map integrates to the signal energy") {
    auto s = hg(3, 0.8, 12.0, 0.04);
    auto map = wigner(s);
    CHECK(map.total() == doctest::Approx(signal_energy(s)).epsilon(1e-6));
}

TEST_CASE("HG_1 Wigner density is negative at the phase-space centre") {
    auto s = hg(1, 1.0, 12.0, 0.05);
    auto map = wigner(s);
    // direct evaluation of the correlation sum at (t = 0, f = 0):
    // W(0,0) = 2 dt sum_m E(m) E*(-m), all real and negative for HG_1.
    const std::size_t ic = (s.size() - 1) / 2;
    double direct = 0.0;
    const auto m_max = std::min(ic, s.size() - 1 - ic);
    direct += std::norm(s.amplitude[ic]);
    for (std::size_t m = 1; m <= m_max; ++m)
        direct += 2.0 * (s.amplitude[ic + m] * std::conj(s.amplitude[ic - m])).real();
    direct *= 2.0 * s.grid.dt;
    CHECK(direct < 0.0);

    // centre column of the map (f = 0 bin is at index axis2.count/2)
    const double from_map = map.at(ic, map.axis2.count / 2);
    CHECK(from_map == doctest::Approx(direct).epsilon(1e-9));
    CHECK(from_map < 0.0);
}

TEST_CASE("spinwave map: uniform phase centres at k = 0, modulation translates") {
    const std::size_t n_z = 257;
    std::vector<cplx> sw(n_z);
    for (std::size_t j = 0; j < n_z; ++j) {
        const double z = double(j) / double(n_z - 1);
        sw[j] = std::exp(-0.5 * std::pow((z - 0.5) / 0.08, 2.0));
    }
    auto base = wigner_spinwave(sw);
    CHECK(std::abs(base.axis2_centroid()) < 1e-6);
    double vmin = 0.0, peak = 0.0;
    for (double v : base.values) {
        vmin = std::min(vmin, v);
        peak = std::max(peak, v);
    }
    CHECK(vmin > -1e-9 * peak);

    const double k0 = 40.0;
    auto mod = sw;
    for (std::size_t j = 0; j < n_z; ++j) {
        const double z = double(j) / double(n_z - 1);
        mod[j] *= std::exp(cplx(0.0, k0 * z));
    }
    auto shifted = wigner_spinwave(mod);
    CHECK(shifted.axis2_centroid() == doctest::Approx(k0).epsilon(1e-6));
    // k-marginal measure: map integrates to the spinwave norm
    double norm = 0.0;
    const double dz = 1.0 / double(n_z - 1);
    for (std::size_t j = 0; j < n_z; ++j)
        norm += dz * std::norm(sw[j]) * ((j == 0 || j + 1 == n_z) ? 0.5 : 1.0);
    CHECK(shifted.total() == doctest::Approx(norm).epsilon(1e-6));
}

TEST_CASE("parallel evaluation is bit-identical to serial") {
    auto s = hg(4, 0.9, 12.0, 0.06);
    WignerOptions serial;
    serial.threads = 1;
    WignerOptions par;
    par.threads = 3;
    auto a = wigner(s, serial);
    auto b = wigner(s, par);
    REQUIRE(a.values.size() == b.values.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        identical = identical && (a.values[i] == b.values[i]);
    CHECK(identical);
}

TEST_CASE("unpadded signal is rejected") {
    // Constant-ish signal touching the grid edges.
    TimeGrid g(-1.0, 0.01, 201);
    std::vector<cplx> a(g.n_samples, cplx(1.0, 0.0));
    PulseSignal s(g, std::move(a));
    CHECK_THROWS_AS(wigner(s), resolution_error);
}
