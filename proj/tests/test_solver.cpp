#include <doctest.h>

#include <cmath>

#include "gemfrft/signals.hpp"
#include "gemfrft/solver.hpp"
#include "gemfrft/util.hpp"
#include "gemfrft/wigner.hpp"

using namespace gemfrft;

namespace {

// Flat pulse with smooth Gaussian ramps, amplitude 1 on the plateau.
PulseSignal plateau_pulse(double t_on, double t_off, double ramp, double span, double dt) {
    const auto n = static_cast<std::size_t>(std::ceil(span / dt)) + 1;
    TimeGrid g(0.0, dt, n);
    std::vector<cplx> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = g.t(i);
        double v;
        if (t < t_on)
            v = std::exp(-0.5 * std::pow((t - t_on) / ramp, 2.0));
        else if (t > t_off)
            v = std::exp(-0.5 * std::pow((t - t_off) / ramp, 2.0));
        else
            v = 1.0;
        a[i] = v;
    }
    return PulseSignal(g, std::move(a));
}

ControlSchedule single_stage(Stage s) {
    ControlSchedule c;
    c.stages.push_back(std::move(s));
    return c;
}

PulseSignal storage_input(int n, int m, double t_i, double dt) {
    HGParams p;
    p.n = n;
    p.sigma_t = mode_volume_scale(m, t_i, 0.8);
    p.center = 0.5 * t_i;
    p.mode_volume = m;
    const auto ns = static_cast<std::size_t>(std::llround(t_i / dt)) + 1;
    return hg_mode(p, TimeGrid(0.0, dt, ns));
}

// Plain GEM storage stage for the given input scale (no chirp).
Stage gem_store_stage(double t_i, double b_mhz, double omega, double d_half = 500.0) {
    Stage s;
    s.name = "gem_store";
    s.duration = t_i;
    s.omega = omega;
    s.delta = two_pi * 250.0;
    s.gradient = two_pi * b_mhz;
    s.bias = -0.5 * s.gradient + omega * omega / s.delta;
    (void)d_half;
    return s;
}

} // namespace

TEST_CASE("integrate_field: zero and constant polarization") {
    const double d = 7.0, dz = 1.0 / 255.0;
    std::vector<cplx> P(256, cplx(0.0, 0.0));
    auto E = integrate_field(P, cplx(0.3, -0.1), d, dz);
    for (const auto& e : E) CHECK(std::abs(e - cplx(0.3, -0.1)) < 1e-15);

    const cplx c(0.2, 0.5);
    std::fill(P.begin(), P.end(), c);
    E = integrate_field(P, 0.0, d, dz);
    for (std::size_t j = 0; j < P.size(); j += 31) {
        const double z = dz * double(j);
        CHECK(std::abs(E[j] - cplx(0.0, std::sqrt(d)) * c * z) < 1e-12);
    }
}

TEST_CASE("resonant steady state reproduces exp(-2d) transmission") {
    MediumParams medium(2.0, MediumParams::rb87_gamma(), 0.0);
    Stage s;
    s.name = "probe";
    s.duration = 8.0;
    auto input = plateau_pulse(2.0, 6.0, 0.35, 8.0, 0.01);

    SolverOptions opt;
    opt.dt = 1e-3;
    opt.grid = SpaceGrid(256);
    auto rec = run(input, single_stage(s), medium, opt);

    // compare plateau centres
    const std::size_t i_mid = static_cast<std::size_t>(std::llround(4.0 / rec.e_out.grid.dt));
    const double trans = std::norm(rec.e_out.amplitude[i_mid]);
    CHECK(trans == doctest::Approx(std::exp(-4.0)).epsilon(0.01));
}

TEST_CASE("pure optical decay is exact in the integrating-factor scheme") {
    MediumParams medium(1e-12, MediumParams::rb87_gamma(), 0.0);
    SpaceGrid grid(128);
    Stage s;
    s.name = "dark";
    s.duration = 1.0;
    auto sched = single_stage(s);

    FieldState st(grid.n_z);
    for (std::size_t j = 0; j < grid.n_z; ++j)
        st.P[j] = std::exp(cplx(0.0, 3.0 * grid.z(j))) * (0.5 + grid.z(j));

    const double dt = 0.01;
    auto zero_in = [](double) { return cplx(0.0, 0.0); };
    FieldState cur = st;
    for (int k = 0; k < 50; ++k) cur = step(cur, sched, medium, grid, k * dt, dt, zero_in);
    const double elapsed = 50 * dt;
    for (std::size_t j = 0; j < grid.n_z; j += 17) {
        const double expect = std::abs(st.P[j]) * std::exp(-medium.gamma * elapsed);
        CHECK(std::abs(std::abs(cur.P[j]) - expect) < 1e-9);
    }
}

TEST_CASE("decoupled spin evolution: modulus constant, phase from delta2") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    SpaceGrid grid(128);
    Stage s;
    s.name = "wind";
    s.duration = 1.0;
    s.gradient = 12.0;
    s.quad = 3.0;
    s.bias = -4.0;
    s.chirp_rate = 2.0;
    auto sched = single_stage(s);

    FieldState st(grid.n_z);
    for (std::size_t j = 0; j < grid.n_z; ++j) st.S[j] = cplx(0.7, -0.2);

    const double dt = 0.02;
    auto zero_in = [](double) { return cplx(0.0, 0.0); };
    FieldState cur = st;
    for (int k = 0; k < 25; ++k) cur = step(cur, sched, medium, grid, k * dt, dt, zero_in);
    const double t1 = 25 * dt;
    for (std::size_t j = 0; j < grid.n_z; j += 29) {
        CHECK(std::abs(std::abs(cur.S[j]) - std::abs(st.S[j])) < 1e-12);
        const double z = grid.z(j);
        const double phase = -(s.gradient * z + s.quad * z * z) * t1 -
                             s.uniform_phase_integral(0.0, t1);
        const cplx expect = st.S[j] * std::exp(cplx(0.0, phase));
        CHECK(std::abs(cur.S[j] - expect) < 1e-10);
    }
}

TEST_CASE("linearity of the full run") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    const double t_i = 4.0;
    auto input = storage_input(0, 1, t_i, 0.01);
    auto sched = single_stage(gem_store_stage(t_i, 2.5, 25.0));

    SolverOptions opt;
    opt.dt = 1e-4;
    opt.grid = SpaceGrid(256);
    auto base = run(input, sched, medium, opt);

    const cplx a(0.3, 0.7);
    PulseSignal scaled_in = input;
    scale_signal(scaled_in, a);
    auto scaled = run(scaled_in, sched, medium, opt);

    double worst = 0.0;
    for (std::size_t i = 0; i < base.e_out.size(); ++i)
        worst = std::max(worst,
                         std::abs(scaled.e_out.amplitude[i] - a * base.e_out.amplitude[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("zero input stays zero") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    PulseSignal zero(TimeGrid(0.0, 0.01, 401), std::vector<cplx>(401, cplx(0.0, 0.0)));
    auto sched = single_stage(gem_store_stage(4.0, 2.5, 25.0));
    SolverOptions opt;
    opt.dt = 2e-4;
    opt.grid = SpaceGrid(128);
    auto rec = run(zero, sched, medium, opt);
    CHECK(rec.ledger.input_energy == 0.0);
    CHECK(rec.ledger.output_energy <= 1e-16);
    CHECK(rec.ledger.final_stored() <= 1e-16);
}

TEST_CASE("energy ledger closes on a chirped GEM storage run") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    const double t_i = 6.0;
    auto input = storage_input(1, 2, t_i, 0.01);
    Stage s = gem_store_stage(t_i, 4.0, 40.0);
    s.chirp_rate = 1.5;
    auto sched = single_stage(s);

    SolverOptions opt;
    opt.dt = 1e-4;
    opt.grid = SpaceGrid(512);
    auto rec = run(input, sched, medium, opt); // throws on imbalance
    const double rel = std::abs(rec.ledger.imbalance()) / rec.ledger.input_energy;
    CHECK(rel < 1e-3);
    CHECK(rec.ledger.final_stored() > 0.5); // most of the pulse is stored
}

TEST_CASE("stored spinwave energy is conserved without decay channels") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    const double t_i = 4.0;
    auto input = storage_input(0, 1, t_i, 0.01);
    ControlSchedule sched;
    sched.stages.push_back(gem_store_stage(t_i, 2.5, 25.0));
    Stage dark;
    dark.name = "dark_hold";
    dark.duration = 3.0;
    dark.gradient = 10.0; // winding only
    sched.stages.push_back(dark);

    SolverOptions opt;
    opt.dt = 1e-4;
    opt.grid = SpaceGrid(384);
    opt.snapshot_stride = 0.5;
    auto rec = run(input, sched, medium, opt);

    // |S|^2 integral between two hold-stage snapshots (P has decayed away)
    double e0 = -1.0, e1 = -1.0;
    const double dz = opt.grid.dz();
    for (const auto& [t, st] : rec.snapshots) {
        if (t < t_i + 0.9) continue;
        double acc = 0.0;
        for (std::size_t j = 0; j < st.S.size(); ++j)
            acc += dz * std::norm(st.S[j]) * ((j == 0 || j + 1 == st.S.size()) ? 0.5 : 1.0);
        if (e0 < 0.0)
            e0 = acc;
        else
            e1 = acc;
    }
    REQUIRE(e0 > 0.0);
    REQUIRE(e1 > 0.0);
    CHECK(std::abs(e1 - e0) / e0 < 2e-6); // per us drift well under 1e-6 of itself
}

TEST_CASE("gradient winding advances the spinwave wavenumber at rate -g") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    const double t_i = 4.0;
    auto input = storage_input(0, 1, t_i, 0.01);
    const double g = 14.0;
    ControlSchedule sched;
    sched.stages.push_back(gem_store_stage(t_i, g / two_pi, 25.0));
    Stage wind;
    wind.name = "wind";
    wind.duration = 2.0;
    wind.gradient = g;
    wind.bias = -0.5 * g;
    sched.stages.push_back(wind);

    SolverOptions opt;
    opt.dt = 1e-4;
    opt.grid = SpaceGrid(512);
    opt.snapshot_stride = 0.5;
    auto rec = run(input, sched, medium, opt);

    double t0 = 0.0, t1 = 0.0, k0 = 0.0, k1 = 0.0;
    bool have0 = false;
    for (const auto& [t, st] : rec.snapshots) {
        if (t < t_i + 0.4) continue;
        const double kc = wigner_spinwave(st.S).axis2_centroid();
        if (!have0) {
            t0 = t;
            k0 = kc;
            have0 = true;
        } else {
            t1 = t;
            k1 = kc;
        }
    }
    REQUIRE(have0);
    REQUIRE(t1 > t0);
    const double rate = (k1 - k0) / (t1 - t0);
    CHECK(rate == doctest::Approx(-g).epsilon(0.01));
}

TEST_CASE("fourth-order convergence in dt (Richardson ratio)") {
    MediumParams medium(500.0, MediumParams::rb87_gamma(), 0.0);
    const double t_i = 2.0;
    auto input = storage_input(0, 1, t_i, 0.008);
    Stage s = gem_store_stage(t_i, 4.0, 30.0);
    s.chirp_rate = 2.0;
    auto sched = single_stage(s);

    SolverOptions opt;
    opt.grid = SpaceGrid(256);
    opt.check_ledger = false; // coarse dts are part of the study
    auto at_dt = [&](double dt) {
        SolverOptions o = opt;
        o.dt = dt;
        return run(input, sched, medium, o).e_out;
    };
    auto c = at_dt(4e-4);
    auto m = at_dt(2e-4);
    auto f = at_dt(1e-4);
    const double d1 = l2_distance(c, m);
    const double d2 = l2_distance(m, f);
    const double ratio = d1 / d2;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}
