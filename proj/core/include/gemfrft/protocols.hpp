#ifndef GEMFRFT_PROTOCOLS_HPP
#define GEMFRFT_PROTOCOLS_HPP

#include <cmath>
#include <limits>

#include "gemfrft/metrics.hpp"
#include "gemfrft/schedule.hpp"
#include "gemfrft/solver.hpp"
#include "gemfrft/util.hpp"

namespace gemfrft {

// Requested transform and signal parameters. theta_extra is the rotation
// beyond the base Fourier transform; ft_sign picks the sign of that base
// pi/2 rotation (physically: the sign of the GEM storage gradient). The
// total phase-space rotation is ft_sign * pi/2 + theta_extra.
struct ProtocolSpec {
    double theta_extra = 0.0;   // rad, |theta_extra| < pi/2 - 1e-3
    int ft_sign = +1;           // +1 or -1
    double w_i_mhz = 1.0;       // input bandwidth (MHz)
    double t_i = 10.0;          // storage duration (us)
    int m = 1;                  // mode volume
    double omega_gem = default_omega_gem(); // GEM Rabi at the m=1, theta=0 reference bandwidth
    double chirp_scale_in = 1.0;
    double chirp_scale_out = 1.0;
    double hold = 0.0;          // optional hold between storage and recall (us)

    // Plain-FT efficiency optimum at m = 1 from a coarse sweep; see
    // tools/regen notes in tests. Held fixed for all sweeps.
    static double default_omega_gem();

    void validate() const;

    double theta_total() const { return ft_sign * (pi / 2.0) + theta_extra; }
    double storage_bandwidth_mhz() const {
        return (1.0 + std::abs(std::tan(theta_extra))) * w_i_mhz;
    }
    double recall_duration() const {
        return (std::abs(std::sin(theta_extra)) + std::abs(std::cos(theta_extra))) * t_i;
    }
    // Signal-frame chirp rate d omega/dt (rad/us^2) shared by storage and
    // recall; the control-field sweep applies -rate during storage and
    // +rate during recall (opposite memory sweeps give equal signal chirps,
    // which is the only pairing that composes to a rotation).
    double signal_chirp_rate() const {
        return two_pi * (w_i_mhz / t_i) * std::tan(theta_extra);
    }
};

// GEM storage + optional hold + EIT recall implementing the fractional
// Fourier transform. The EIT Rabi comes from calibrate_vg targeting
// v_g = L / T_f (results are memoized per medium/target). Attaches a
// warning when the recall chirp span exceeds the atomic linewidth 2 gamma.
ControlSchedule build_frft_schedule(const ProtocolSpec& spec, const MediumParams& medium);

// GEM storage (chirped) + dispersive hold (quadratic spatial detuning) +
// flipped-gradient GEM recall (chirped). Rotation by theta_extra composed
// with envelope conjugation. dispersion_strength in rad/us per unit z^2;
// NaN selects the shear-trigonometry default for the given hold.
ControlSchedule build_gemgem_schedule(const ProtocolSpec& spec, const MediumParams& medium,
                                      double dispersion_strength, double hold_duration);

// Shear-derived default for the hold-stage quadratic detuning.
double default_gemgem_dispersion(const ProtocolSpec& spec, double hold_duration);

struct VgCalibration {
    double omega = 0.0; // EIT control Rabi (rad/us)
    double delay = 0.0; // achieved group delay (us)
    int iterations = 0;
};

// Slow-light initial estimate delay ~ 2 d gamma / |Omega|^2.
double vg_initial_omega(double target_vg, const MediumParams& medium);

// Tune the EIT Rabi until a weak narrowband probe's simulated group delay
// equals L / target_vg (secant iteration on the simulated delay, 0.5%
// target). Throws calibration_error on non-convergence within 20
// iterations or when the Rabi exceeds 100 gamma.
VgCalibration calibrate_vg(double target_vg, const MediumParams& medium,
                           const SpaceGrid& grid, double dt = 1e-3);

// One full protocol run against its analytic target.
struct FrftRunResult {
    ControlSchedule schedule;
    SimulationRecord record;
    PulseSignal output; // e_out restricted to the recall stage
    PulseSignal target; // oracle image of the input on the output timing
    MetricSet scores;
};

enum class ProtocolKind { gem_eit, gem_gem };

// Build + run + score one transform of `input` (which must be centred at
// t_i/2 on [0, t_i]). For gem_gem, dispersion NaN selects the default.
FrftRunResult simulate_frft(const ProtocolSpec& spec, const MediumParams& medium,
                            const PulseSignal& input, const SolverOptions& options,
                            ProtocolKind kind = ProtocolKind::gem_eit,
                            double dispersion_strength =
                                std::numeric_limits<double>::quiet_NaN());

// Oracle image of `input` for a schedule built from `spec` (same grid
// spacing as the input, centred on the recall window).
PulseSignal protocol_target(const PulseSignal& input, const ControlSchedule& schedule);

struct ChirpCalibration {
    double scale_in = 1.0;
    double scale_out = 1.0;
    double fidelity = 0.0;          // at the optimum
    double baseline_fidelity = 0.0; // at scales (1, 1)
};

// Maximize conditional fidelity of the simulated transform of a known HG
// probe against the oracle target over (chirp_scale_in, chirp_scale_out)
// in [0.5, 2]^2: golden-section per axis, two coordinate sweeps. Throws
// calibration_error when the landscape is flat (dynamic range < 1e-3).
ChirpCalibration calibrate_chirps(const ProtocolSpec& spec, const MediumParams& medium,
                                  const SpaceGrid& grid, const PulseSignal& probe,
                                  double dt = 1e-3);

} // namespace gemfrft

#endif
