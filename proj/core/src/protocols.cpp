#include "gemfrft/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

#include "gemfrft/frft.hpp"
#include "gemfrft/signals.hpp"

namespace gemfrft {

namespace {

constexpr double gem_delta = two_pi * 250.0; // one-photon detuning during GEM stages (rad/us)

double hg_halfwidth_cached(int m) {
    static std::mutex mx;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    const double a = hg_energy_halfwidth(m);
    cache.emplace(m, a);
    return a;
}

// GEM control Rabi for a stage spanning bandwidth b_mhz: the Raman optical
// depth per unit bandwidth is held fixed by |Omega|^2 proportional to the
// gradient, referenced to the m = 1, theta = 0 bandwidth of the same
// signal family.
double scaled_omega_gem(const ProtocolSpec& spec, double b_mhz) {
    const double a1 = hg_halfwidth_cached(1);
    const double am = hg_halfwidth_cached(spec.m);
    const double b_ref = spec.w_i_mhz * (a1 / am) * (a1 / am);
    return spec.omega_gem * std::sqrt(b_mhz / b_ref);
}

// Raman light shift of the two-photon line under a far-detuned control.
double light_shift(double omega, double delta) {
    return omega * omega / delta;
}

struct GoldenResult {
    double x;
    double f;
    double f_min_seen;
    double f_max_seen;
};

// Golden-section minimization of f on [a, b]; also reports the range of
// values seen so flat landscapes can be detected.
template <typename F>
GoldenResult golden_min(F f, double a, double b, int n_iter) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double lo = std::min(f1, f2), hi = std::max(f1, f2);
    for (int i = 0; i < n_iter; ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            lo = std::min(lo, f1); hi = std::max(hi, f1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            lo = std::min(lo, f2); hi = std::max(hi, f2);
        }
    }
    if (f1 < f2) return {x1, f1, lo, hi};
    return {x2, f2, lo, hi};
}

} // namespace

double ProtocolSpec::default_omega_gem() { return 33.0; }

void ProtocolSpec::validate() const {
    if (std::abs(theta_extra) >= pi / 2.0 - 1e-3)
        throw invalid_parameter("ProtocolSpec: |theta_extra| must be < pi/2 - 1e-3");
    if (ft_sign != 1 && ft_sign != -1)
        throw invalid_parameter("ProtocolSpec: ft_sign must be +1 or -1");
    if (!(w_i_mhz > 0.0)) throw invalid_parameter("ProtocolSpec: w_i_mhz must be positive");
    if (!(t_i > 0.0)) throw invalid_parameter("ProtocolSpec: t_i must be positive");
    if (m < 1) throw invalid_parameter("ProtocolSpec: m must be >= 1");
    if (!(omega_gem > 0.0)) throw invalid_parameter("ProtocolSpec: omega_gem must be positive");
    if (hold < 0.0) throw invalid_parameter("ProtocolSpec: hold must be >= 0");
    if (!(chirp_scale_in > 0.0) || !(chirp_scale_out > 0.0))
        throw invalid_parameter("ProtocolSpec: chirp scales must be positive");
}

double vg_initial_omega(double target_vg, const MediumParams& medium) {
    if (!(target_vg > 0.0)) throw invalid_parameter("vg_initial_omega: target_vg must be positive");
    const double delay = SpaceGrid::L / target_vg;
    return std::sqrt(2.0 * medium.d * medium.gamma / delay);
}

VgCalibration calibrate_vg(double target_vg, const MediumParams& medium,
                           const SpaceGrid& grid, double dt) {
    if (!(target_vg > 0.0)) throw invalid_parameter("calibrate_vg: target_vg must be positive");
    medium.validate();
    const double target_delay = SpaceGrid::L / target_vg;

    // Narrowband Gaussian probe well inside the transparency window.
    const double sigma_p = std::max(0.6, 0.12 * target_delay);
    const double t_c = 5.0 * sigma_p;
    const double duration = t_c + target_delay + 9.0 * sigma_p;
    TimeGrid probe_grid(0.0, sigma_p / 40.0,
                        static_cast<std::size_t>(std::ceil(duration / (sigma_p / 40.0))) + 1);
    HGParams hp;
    hp.n = 0;
    hp.sigma_t = sigma_p;
    hp.center = t_c;
    PulseSignal probe = hg_mode(hp, probe_grid);
    const double in_centroid = signal_centroid(probe);

    SolverOptions opt;
    opt.dt = dt;
    opt.grid = grid;
    opt.check_ledger = true;

    auto simulated_delay = [&](double omega) {
        if (omega > 100.0 * medium.gamma)
            throw calibration_error("calibrate_vg: requested Rabi exceeds 100 gamma "
                                    "(target group velocity too fast)");
        ControlSchedule sched;
        Stage s;
        s.name = "eit_probe";
        s.duration = probe_grid.t_end();
        s.omega = omega;
        sched.stages.push_back(s);
        auto rec = run(probe, sched, medium, opt);
        return signal_centroid(rec.e_out) - in_centroid;
    };

    double u0 = std::log(vg_initial_omega(target_vg, medium));
    double f0 = std::log(simulated_delay(std::exp(u0)) / target_delay);
    int iters = 1;
    if (std::abs(f0) < 5e-3) return {std::exp(u0), target_delay * std::exp(f0), iters};

    // delay ~ 1/Omega^2, so ln(delay) is close to linear in ln(Omega)
    // with slope -2; one Newton-like step then secant.
    double u1 = u0 + 0.5 * f0;
    double f1 = std::log(simulated_delay(std::exp(u1)) / target_delay);
    ++iters;
    while (iters < 20) {
        if (std::abs(f1) < 5e-3) return {std::exp(u1), target_delay * std::exp(f1), iters};
        const double denom = f1 - f0;
        double u2 = (std::abs(denom) > 1e-12) ? u1 - f1 * (u1 - u0) / denom : u1 + 0.5 * f1;
        u0 = u1; f0 = f1;
        u1 = u2;
        f1 = std::log(simulated_delay(std::exp(u1)) / target_delay);
        ++iters;
    }
    std::ostringstream os;
    os << "calibrate_vg: no convergence in 20 iterations; residual delay error "
       << (std::exp(f1) - 1.0) * 100.0 << "% at Omega = " << std::exp(u1);
    throw calibration_error(os.str());
}

namespace {

// Session cache for EIT calibrations: the same recall velocity recurs
// across every sweep row.
VgCalibration cached_calibrate_vg(double target_vg, const MediumParams& medium) {
    static std::mutex mx;
    static std::map<std::string, VgCalibration> cache;
    char key[128];
    std::snprintf(key, sizeof key, "%.10g|%.10g|%.10g|%.10g", target_vg, medium.d, medium.gamma,
                  medium.gamma_S);
    {
        std::lock_guard<std::mutex> lock(mx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    VgCalibration cal = calibrate_vg(target_vg, medium, SpaceGrid{512}, 1e-3);
    std::lock_guard<std::mutex> lock(mx);
    cache.emplace(key, cal);
    return cal;
}

} // namespace

ControlSchedule build_frft_schedule(const ProtocolSpec& spec, const MediumParams& medium) {
    spec.validate();
    medium.validate();

    const double b_mhz = spec.storage_bandwidth_mhz();
    const double g = spec.ft_sign * two_pi * b_mhz / SpaceGrid::L;
    const double t_f = spec.recall_duration();
    const double v_g = SpaceGrid::L / t_f;
    const double c_sig = spec.signal_chirp_rate();
    const double omega_store = scaled_omega_gem(spec, b_mhz);

    ControlSchedule sched;
    sched.meta.theta_total = spec.theta_total();
    sched.meta.w_i_mhz = spec.w_i_mhz;
    sched.meta.storage_bw_mhz = b_mhz;
    sched.meta.t_f = t_f;
    sched.meta.v_g = v_g;
    const double t_rewind = 0.5 * spec.t_i;
    sched.meta.t_scale = std::sqrt(spec.t_i / (two_pi * spec.w_i_mhz));
    sched.meta.t_center_in = 0.5 * spec.t_i;
    sched.meta.t_center_out = spec.t_i + t_rewind + spec.hold + 0.5 * t_f;
    sched.meta.conjugating = false;

    Stage store;
    store.name = "gem_store";
    store.duration = spec.t_i;
    store.omega = omega_store;
    store.delta = gem_delta;
    store.gradient = g;
    store.chirp_rate = -spec.chirp_scale_in * c_sig;
    // Centre the resonance band on the signal carrier; the Raman light
    // shift would otherwise push the band by |Omega|^2 / Delta.
    store.bias = -0.5 * g * SpaceGrid::L + light_shift(omega_store, gem_delta);
    sched.stages.push_back(store);

    // Storage winds the spinwave to mean wavenumber -g T_i / 2, outside
    // the EIT acceptance (|k| < window / v_g). Reversing the gradient with
    // the control off rephases it to k ~ 0 silently; emission needs the
    // control field, so nothing leaks here.
    Stage rewind;
    rewind.name = "gem_rewind";
    rewind.duration = t_rewind;
    rewind.gradient = -g;
    rewind.bias = 0.5 * g * SpaceGrid::L;
    sched.stages.push_back(rewind);

    if (spec.hold > 0.0) {
        Stage hold;
        hold.name = "hold";
        hold.duration = spec.hold;
        sched.stages.push_back(hold);
    }

    const VgCalibration cal = cached_calibrate_vg(v_g, medium);
    sched.meta.omega_eit = cal.omega;

    Stage recall;
    recall.name = "eit_recall";
    recall.duration = t_f;
    recall.omega = cal.omega;
    recall.delta = 0.0;
    recall.chirp_rate = +spec.chirp_scale_out * c_sig;
    sched.stages.push_back(recall);

    const double linewidth = 2.0 * medium.gamma;
    if (recall.chirp_span() > linewidth) {
        std::ostringstream os;
        os << "eit_recall chirp span " << recall.chirp_span() << " rad/us exceeds the atomic "
           << "linewidth " << linewidth << " rad/us; EIT dynamics will not stay constant";
        sched.warnings.push_back(os.str());
    }
    return sched;
}

double default_gemgem_dispersion(const ProtocolSpec& spec, double hold_duration) {
    if (!(hold_duration > 0.0))
        throw invalid_parameter("default_gemgem_dispersion: hold_duration must be positive");
    // Middle shear of the 3-shear rotation: quadratic spectral phase
    // e = sin(theta) in matched units; realized as q (z - 1/2)^2 over the
    // hold, q = -g^2 s^2 sin(theta) / (2 tau_hold).
    const double theta = spec.theta_extra;
    const double b_mhz = (1.0 + std::abs(std::tan(0.5 * theta))) * spec.w_i_mhz;
    const double g = spec.ft_sign * two_pi * b_mhz / SpaceGrid::L;
    const double s2 = spec.t_i / (two_pi * spec.w_i_mhz);
    return -g * g * s2 * std::sin(theta) / (2.0 * hold_duration);
}

ControlSchedule build_gemgem_schedule(const ProtocolSpec& spec, const MediumParams& medium,
                                      double dispersion_strength, double hold_duration) {
    spec.validate();
    medium.validate();
    if (!(hold_duration > 0.0))
        throw invalid_parameter("build_gemgem_schedule: hold_duration must be positive");
    if (std::isnan(dispersion_strength))
        dispersion_strength = default_gemgem_dispersion(spec, hold_duration);

    const double theta = spec.theta_extra;
    // 3-shear decomposition of a rotation: chirp tan(theta/2), dispersion
    // sin(theta), chirp tan(theta/2) (the recall leg conjugates the
    // envelope, so the transform is rotation * conjugation).
    const double c_half = two_pi * (spec.w_i_mhz / spec.t_i) * std::tan(0.5 * theta);
    const double b_mhz = (1.0 + std::abs(std::tan(0.5 * theta))) * spec.w_i_mhz;
    const double g = spec.ft_sign * two_pi * b_mhz / SpaceGrid::L;
    const double omega_store = scaled_omega_gem(spec, b_mhz);

    ControlSchedule sched;
    sched.meta.theta_total = theta;
    sched.meta.w_i_mhz = spec.w_i_mhz;
    sched.meta.storage_bw_mhz = b_mhz;
    sched.meta.t_f = spec.t_i;
    sched.meta.t_scale = std::sqrt(spec.t_i / (two_pi * spec.w_i_mhz));
    sched.meta.t_center_in = 0.5 * spec.t_i;
    sched.meta.t_center_out = spec.t_i + hold_duration + 0.5 * spec.t_i;
    sched.meta.conjugating = true;

    Stage store;
    store.name = "gem_store";
    store.duration = spec.t_i;
    store.omega = omega_store;
    store.delta = gem_delta;
    store.gradient = g;
    store.chirp_rate = -spec.chirp_scale_in * c_half;
    store.bias = -0.5 * g * SpaceGrid::L + light_shift(omega_store, gem_delta);
    sched.stages.push_back(store);

    Stage hold;
    hold.name = "hold";
    hold.duration = hold_duration;
    // Centred quadratic q (z - 1/2)^2 expressed through the schedule's
    // z and z^2 terms plus a constant.
    hold.quad = dispersion_strength;
    hold.gradient = -dispersion_strength;
    hold.bias = 0.25 * dispersion_strength;
    sched.stages.push_back(hold);

    Stage recall;
    recall.name = "gem_recall";
    recall.duration = spec.t_i;
    recall.omega = omega_store;
    recall.delta = gem_delta;
    recall.gradient = -g;
    recall.chirp_rate = +spec.chirp_scale_out * c_half;
    recall.bias = 0.5 * g * SpaceGrid::L + light_shift(omega_store, gem_delta);
    sched.stages.push_back(recall);
    return sched;
}

PulseSignal protocol_target(const PulseSignal& input, const ControlSchedule& schedule) {
    FrftSpec fs;
    fs.alpha = schedule.meta.theta_total;
    fs.t_scale_in = schedule.meta.t_scale;
    fs.t_scale_out = schedule.meta.t_scale;
    fs.center_in = schedule.meta.t_center_in;
    fs.center_out = schedule.meta.t_center_out;
    if (!schedule.meta.conjugating) return frft_oracle(input, fs);
    PulseSignal conj_in = input;
    for (auto& a : conj_in.amplitude) a = std::conj(a);
    return frft_oracle(conj_in, fs);
}

FrftRunResult simulate_frft(const ProtocolSpec& spec, const MediumParams& medium,
                            const PulseSignal& input, const SolverOptions& options,
                            ProtocolKind kind, double dispersion_strength) {
    FrftRunResult res;
    if (kind == ProtocolKind::gem_eit) {
        res.schedule = build_frft_schedule(spec, medium);
    } else {
        const double hold = spec.hold > 0.0 ? spec.hold : 1.0;
        res.schedule = build_gemgem_schedule(spec, medium, dispersion_strength, hold);
    }
    res.record = run(input, res.schedule, medium, options);

    // Recall timing from the stored spinwave itself. Dispersive deposition
    // in the Raman-layer wings translates the stored distribution along z
    // by a few percent of L; the camera for that systematic is the
    // end-of-storage snapshot (an experiment trims it with reference
    // pulses). The target centre moves by the equivalent output-time
    // translation; shape and phase errors still count against fidelity.
    {
        const double t_store = res.schedule.stages.front().duration;
        const FieldState* stored = nullptr;
        for (const auto& [t, st] : res.record.snapshots)
            if (std::abs(t - t_store) < 1e-9) stored = &st;
        if (stored) {
            double num = 0.0, den = 0.0;
            const std::size_t nz = stored->S.size();
            for (std::size_t j = 0; j < nz; ++j) {
                const double z = double(j) / double(nz - 1);
                num += std::norm(stored->S[j]) * z;
                den += std::norm(stored->S[j]);
            }
            if (den > 0.0) {
                const double dz_bar = num / den - 0.5;
                if (kind == ProtocolKind::gem_eit) {
                    res.schedule.meta.t_center_out -= dz_bar * res.schedule.meta.t_f;
                } else {
                    // GEM-GEM re-emits when the winding returns to k = 0;
                    // the timing systematic lives in the mean wavenumber.
                    double knum = 0.0, kden = 0.0;
                    for (std::size_t j = 1; j + 1 < nz; ++j) {
                        const double w = std::norm(stored->S[j]);
                        if (w <= 0.0) continue;
                        const cplx dS = stored->S[j + 1] - stored->S[j - 1];
                        knum += (std::conj(stored->S[j]) * dS).imag() * 0.5 * double(nz - 1);
                        kden += w;
                    }
                    if (kden > 0.0) {
                        const double k_bar = knum / kden;
                        const double g_store = res.schedule.stages.front().gradient;
                        const double t_rs = res.schedule.stage_start(res.schedule.stages.size() - 1);
                        res.schedule.meta.t_center_out = t_rs - k_bar / g_store;
                    }
                }
            }
        }
    }

    // Restrict the output to the recall stage.
    const std::size_t last = res.schedule.stages.size() - 1;
    const double t_rs = res.schedule.stage_start(last);
    const double t_re = t_rs + res.schedule.stages[last].duration;
    const PulseSignal& eo = res.record.e_out;
    std::size_t i0 = 0, i1 = eo.size();
    while (i0 < eo.size() && eo.grid.t(i0) < t_rs - 1e-12) ++i0;
    while (i1 > i0 && eo.grid.t(i1 - 1) > t_re + 1e-12) --i1;
    if (i1 - i0 < 2) throw numerical_failure("simulate_frft: empty recall window");
    TimeGrid og(eo.grid.t(i0), eo.grid.dt, i1 - i0);
    res.output = PulseSignal(og, std::vector<cplx>(eo.amplitude.begin() + i0,
                                                   eo.amplitude.begin() + i1));
    res.target = protocol_target(input, res.schedule);
    res.scores = metrics(res.output, input, res.target);
    return res;
}

ChirpCalibration calibrate_chirps(const ProtocolSpec& spec, const MediumParams& medium,
                                  const SpaceGrid& grid, const PulseSignal& probe,
                                  double dt) {
    spec.validate();
    SolverOptions opt;
    opt.dt = dt;
    opt.grid = grid;

    auto fidelity_at = [&](double s_in, double s_out) {
        ProtocolSpec s = spec;
        s.chirp_scale_in = s_in;
        s.chirp_scale_out = s_out;
        return simulate_frft(s, medium, probe, opt).scores.conditional_fidelity;
    };

    const double baseline = fidelity_at(1.0, 1.0);
    ChirpCalibration out;
    out.baseline_fidelity = baseline;

    if (spec.signal_chirp_rate() == 0.0) {
        // theta = 0: the chirps vanish and the scales are inert.
        out.fidelity = baseline;
        return out;
    }

    double s_in = 1.0, s_out = 1.0, best = baseline;
    double seen_lo = baseline, seen_hi = baseline;
    const int evals_per_axis = 9;
    for (int sweep = 0; sweep < 2; ++sweep) {
        auto r_in = golden_min([&](double x) { return -fidelity_at(x, s_out); }, 0.5, 2.0,
                               evals_per_axis);
        s_in = r_in.x;
        seen_lo = std::min(seen_lo, -r_in.f_max_seen);
        seen_hi = std::max(seen_hi, -r_in.f_min_seen);
        auto r_out = golden_min([&](double x) { return -fidelity_at(s_in, x); }, 0.5, 2.0,
                                evals_per_axis);
        s_out = r_out.x;
        seen_lo = std::min(seen_lo, -r_out.f_max_seen);
        seen_hi = std::max(seen_hi, -r_out.f_min_seen);
        best = -r_out.f;
    }
    if (seen_hi - seen_lo < 1e-3)
        throw calibration_error("calibrate_chirps: fidelity landscape flat "
                                "(dynamic range < 1e-3), scales unidentifiable");
    if (best >= baseline) {
        out.scale_in = s_in;
        out.scale_out = s_out;
        out.fidelity = best;
    } else {
        out.fidelity = baseline; // argmax dominates every sampled point
    }
    return out;
}

} // namespace gemfrft
