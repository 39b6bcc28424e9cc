#include "gemfrft/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gemfrft/util.hpp"

namespace gemfrft {

std::vector<cplx> integrate_field(std::span<const cplx> P, cplx e_in, double d, double dz) {
    std::vector<cplx> E(P.size());
    if (P.empty()) return E;
    const cplx coupling = cplx(0.0, std::sqrt(d));
    E[0] = e_in;
    for (std::size_t j = 1; j < P.size(); ++j)
        E[j] = E[j - 1] + coupling * (0.5 * dz) * (P[j - 1] + P[j]);
    return E;
}

namespace {

// Integrating-factor RK4 over one stage. The per-z static part of the S
// diagonal, exp(-(gamma_S + i (g z + q z^2)) dt/2), is precomputed once per
// stage; the uniform chirp/bias phase and the P diagonal are per-step
// scalars.
class StageStepper {
public:
    StageStepper(const Stage& stage, const MediumParams& medium, const SpaceGrid& grid,
                 double dt)
        : stage_(stage), medium_(medium), grid_(grid), dt_(dt) {
        const std::size_t n = grid.n_z;
        zfac_half_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double z = grid.z(j);
            const cplx lam(medium.gamma_S, stage.gradient * z + stage.quad * z * z);
            zfac_half_[j] = std::exp(-lam * (0.5 * dt));
        }
        ap_half_ = std::exp(-cplx(medium.gamma, stage.delta) * (0.5 * dt));
        ap_full_ = ap_half_ * ap_half_;
        const std::size_t nn = n;
        fS1_.resize(nn); fP1_.resize(nn); fS2_.resize(nn); fP2_.resize(nn);
        fS3_.resize(nn); fP3_.resize(nn); fS4_.resize(nn); fP4_.resize(nn);
        tS_.resize(nn); tP_.resize(nn); eb_.resize(nn);
    }

    // The collective field-polarization mode oscillates at up to
    // d gamma L / pi after the integrating-factor transform; explicit RK4
    // needs |omega| dt < 2.8.
    static double stability_limit_dt(const MediumParams& medium) {
        return 2.5 * pi / (medium.d * medium.gamma * SpaceGrid::L);
    }

    // Advance st from stage-local time tau to tau + dt. e0/eh/e1 = input
    // boundary field at tau, tau + dt/2, tau + dt.
    void advance(FieldState& st, double tau, cplx e0, cplx eh, cplx e1) {
        const std::size_t n = grid_.n_z;
        const double dz = grid_.dz();
        const double h = dt_;
        const cplx i_omega = cplx(0.0, 1.0) * stage_.omega;
        const cplx i_omega_c = cplx(0.0, 1.0) * std::conj(stage_.omega);
        const cplx i_g = cplx(0.0, std::sqrt(medium_.d) * medium_.gamma);

        // Uniform-detuning phase over the two half steps (chirp integral in
        // closed form, so the linear sweep costs no accuracy).
        const cplx c1 = std::exp(cplx(0.0, -stage_.uniform_phase_integral(tau, tau + 0.5 * h)));
        const cplx c2 =
            std::exp(cplx(0.0, -stage_.uniform_phase_integral(tau + 0.5 * h, tau + h)));
        const cplx cf = c1 * c2;

        auto coupling = [&](const std::vector<cplx>& S, const std::vector<cplx>& P, cplx e_b,
                            std::vector<cplx>& fS, std::vector<cplx>& fP) {
            const cplx ig_z = cplx(0.0, std::sqrt(medium_.d));
            eb_[0] = e_b;
            for (std::size_t j = 1; j < n; ++j)
                eb_[j] = eb_[j - 1] + ig_z * (0.5 * dz) * (P[j - 1] + P[j]);
            for (std::size_t j = 0; j < n; ++j) {
                fS[j] = i_omega_c * P[j];
                fP[j] = i_g * eb_[j] + i_omega * S[j];
            }
        };

        // k1 at tau
        coupling(st.S, st.P, e0, fS1_, fP1_);
        // k2 at tau + h/2 on u2 = Phi_half (y0 + h/2 k1)
        for (std::size_t j = 0; j < n; ++j) {
            tS_[j] = zfac_half_[j] * c1 * (st.S[j] + 0.5 * h * fS1_[j]);
            tP_[j] = ap_half_ * (st.P[j] + 0.5 * h * fP1_[j]);
        }
        coupling(tS_, tP_, eh, fS2_, fP2_);
        // k3 at tau + h/2 on u3 = Phi_half y0 + h/2 k2'
        for (std::size_t j = 0; j < n; ++j) {
            tS_[j] = zfac_half_[j] * c1 * st.S[j] + 0.5 * h * fS2_[j];
            tP_[j] = ap_half_ * st.P[j] + 0.5 * h * fP2_[j];
        }
        coupling(tS_, tP_, eh, fS3_, fP3_);
        // k4 at tau + h on u4 = Phi_full y0 + h Phi_2 k3'
        for (std::size_t j = 0; j < n; ++j) {
            const cplx phi_h = zfac_half_[j];
            tS_[j] = phi_h * phi_h * cf * st.S[j] + h * phi_h * c2 * fS3_[j];
            tP_[j] = ap_full_ * st.P[j] + h * ap_half_ * fP3_[j];
        }
        coupling(tS_, tP_, e1, fS4_, fP4_);
        // y1 = Phi_full y0 + h/6 (Phi_full k1 + 2 Phi_2 (k2' + k3') + k4')
        for (std::size_t j = 0; j < n; ++j) {
            const cplx phi_h = zfac_half_[j];
            const cplx phi_f = phi_h * phi_h * cf;
            const cplx phi_2 = phi_h * c2;
            st.S[j] = phi_f * st.S[j] +
                      (h / 6.0) * (phi_f * fS1_[j] + 2.0 * phi_2 * (fS2_[j] + fS3_[j]) + fS4_[j]);
            st.P[j] = ap_full_ * st.P[j] +
                      (h / 6.0) * (ap_full_ * fP1_[j] + 2.0 * ap_half_ * (fP2_[j] + fP3_[j]) +
                                   fP4_[j]);
        }
        st.E = integrate_field(st.P, e1, medium_.d, dz);
    }

private:
    const Stage& stage_;
    const MediumParams& medium_;
    const SpaceGrid& grid_;
    double dt_;
    std::vector<cplx> zfac_half_;
    cplx ap_half_, ap_full_;
    std::vector<cplx> fS1_, fP1_, fS2_, fP2_, fS3_, fP3_, fS4_, fP4_, tS_, tP_, eb_;
};

double trapz_norm2(const std::vector<cplx>& v, double dz) {
    double acc = 0.0;
    const std::size_t n = v.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        acc += w * std::norm(v[j]);
    }
    return acc * dz;
}

} // namespace

FieldState step(const FieldState& state, const ControlSchedule& schedule,
                const MediumParams& medium, const SpaceGrid& grid, double t, double dt,
                const std::function<cplx(double)>& e_in) {
    schedule.validate();
    medium.validate();
    auto [idx, tau] = schedule.locate(t);
    const Stage& stage = schedule.stages[idx];
    if (tau + dt > stage.duration + 1e-9 * stage.duration)
        throw invalid_parameter("step: step crosses a stage boundary");
    StageStepper stepper(stage, medium, grid, dt);
    FieldState st = state;
    stepper.advance(st, tau, e_in(t), e_in(t + 0.5 * dt), e_in(t + dt));
    return st;
}

SimulationRecord run(const PulseSignal& input, const ControlSchedule& schedule,
                     const MediumParams& medium, const SolverOptions& options) {
    schedule.validate();
    medium.validate();
    options.grid.validate();
    if (!(options.dt > 0.0)) throw invalid_parameter("run: dt must be positive");

    const SpaceGrid& grid = options.grid;
    const std::size_t n_z = grid.n_z;
    const double dz = grid.dz();
    const double total = schedule.total_duration();


    SignalInterpolant e_in(input);
    FieldState st(n_z);

    // Sample log of (t, E(L), e_in) at accepted step edges.
    std::vector<double> t_log;
    std::vector<cplx> eL_log;
    t_log.reserve(static_cast<std::size_t>(total / options.dt) + 16);
    eL_log.reserve(t_log.capacity());

    EnergyLedger ledger;
    SimulationRecord rec;
    rec.warnings = schedule.warnings;
    if (options.dt > StageStepper::stability_limit_dt(medium)) {
        std::ostringstream os;
        os << "dt = " << options.dt << " exceeds the collective-mode stability estimate "
           << StageStepper::stability_limit_dt(medium)
           << "; expect a ledger failure (reduce dt)";
        rec.warnings.push_back(os.str());
    }

    auto stored_now = [&]() {
        return (trapz_norm2(st.S, dz) + trapz_norm2(st.P, dz)) / medium.gamma;
    };
    auto decay_rate_now = [&]() {
        return (2.0 * medium.gamma * trapz_norm2(st.P, dz) +
                2.0 * medium.gamma_S * trapz_norm2(st.S, dz)) /
               medium.gamma;
    };

    double t_abs = 0.0;
    st.E = integrate_field(st.P, e_in(0.0), medium.d, dz);
    t_log.push_back(0.0);
    eL_log.push_back(st.E[n_z - 1]);
    ledger.time.push_back(0.0);
    ledger.stored.push_back(stored_now());
    ledger.decayed.push_back(0.0);

    double acc_in = 0.0, acc_out = 0.0, acc_decay = 0.0;
    double prev_in = std::norm(e_in(0.0));
    double prev_out = std::norm(st.E[n_z - 1]);
    double prev_decay = decay_rate_now();
    double next_snapshot = options.snapshot_stride > 0.0 ? options.snapshot_stride : -1.0;

    for (std::size_t si = 0; si < schedule.stages.size(); ++si) {
        const Stage& stage = schedule.stages[si];
        const auto n_steps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(stage.duration / options.dt)));
        const double dt = stage.duration / double(n_steps);
        StageStepper stepper(stage, medium, grid, dt);
        const double t_stage0 = t_abs;

        for (std::size_t k = 0; k < n_steps; ++k) {
            const double tau = double(k) * dt;
            const double t0 = t_stage0 + tau;
            stepper.advance(st, tau, e_in(t0), e_in(t0 + 0.5 * dt), e_in(t0 + dt));
            t_abs = t_stage0 + double(k + 1) * dt;

            const double now_in = std::norm(e_in(t_abs));
            const double now_out = std::norm(st.E[n_z - 1]);
            const double now_decay = decay_rate_now();
            acc_in += 0.5 * dt * (prev_in + now_in);
            acc_out += 0.5 * dt * (prev_out + now_out);
            acc_decay += 0.5 * dt * (prev_decay + now_decay);
            prev_in = now_in;
            prev_out = now_out;
            prev_decay = now_decay;

            t_log.push_back(t_abs);
            eL_log.push_back(st.E[n_z - 1]);
            ledger.time.push_back(t_abs);
            ledger.stored.push_back(stored_now());
            ledger.decayed.push_back(acc_decay);

            if (next_snapshot > 0.0 && t_abs + 1e-12 >= next_snapshot) {
                rec.snapshots.emplace_back(t_abs, st);
                next_snapshot += options.snapshot_stride;
            }
            if (!std::isfinite(st.S[n_z / 2].real()) || !std::isfinite(st.P[n_z / 2].real()))
                throw numerical_failure("run: non-finite state at t = " + std::to_string(t_abs));
        }
        rec.snapshots.emplace_back(t_abs, st); // stage boundary snapshot
    }

    ledger.input_energy = acc_in;
    ledger.output_energy = acc_out;

    // e_out on the input's dt over the full run; step samples are reused
    // exactly when they line up, spline-interpolated otherwise.
    {
        const double dt_out = input.grid.dt;
        const auto n_out = static_cast<std::size_t>(std::floor(total / dt_out + 1e-9)) + 1;
        TimeGrid out_grid(0.0, dt_out, n_out);
        std::vector<cplx> a(n_out);
        // Raw samples may be non-uniform at stage joints; linear lookup
        // with a moving hint covers the rare misaligned case.
        std::size_t hint = 0;
        for (std::size_t i = 0; i < n_out; ++i) {
            const double t = out_grid.t(i);
            while (hint + 1 < t_log.size() && t_log[hint + 1] < t - 1e-12) ++hint;
            // exact hit?
            if (std::abs(t_log[hint] - t) < 1e-9) {
                a[i] = eL_log[hint];
            } else if (hint + 1 < t_log.size() && std::abs(t_log[hint + 1] - t) < 1e-9) {
                a[i] = eL_log[hint + 1];
            } else if (hint + 1 < t_log.size()) {
                const double w = (t - t_log[hint]) / (t_log[hint + 1] - t_log[hint]);
                a[i] = (1.0 - w) * eL_log[hint] + w * eL_log[hint + 1];
            } else {
                a[i] = eL_log.back();
            }
        }
        rec.e_out = PulseSignal(out_grid, std::move(a));
    }

    rec.ledger = ledger;

    if (options.check_ledger) {
        const double scale = std::max(ledger.input_energy, 1e-30);
        const double rel = std::abs(ledger.imbalance()) / scale;
        if (ledger.input_energy == 0.0) {
            if (ledger.output_energy + ledger.final_stored() + ledger.final_decayed() > 1e-15)
                throw numerical_failure("run: energy appeared from a zero input");
        } else if (rel > options.ledger_tolerance) {
            std::ostringstream os;
            os << "run: energy ledger imbalance " << rel << " exceeds tolerance "
               << options.ledger_tolerance << " (in=" << ledger.input_energy
               << " out=" << ledger.output_energy << " stored=" << ledger.final_stored()
               << " decayed=" << ledger.final_decayed() << ")";
            throw numerical_failure(os.str());
        }
    }
    return rec;
}

} // namespace gemfrft
