#ifndef GEMFRFT_SCHEDULE_HPP
#define GEMFRFT_SCHEDULE_HPP

#include <complex>
#include <string>
#include <vector>

#include "gemfrft/errors.hpp"

namespace gemfrft {

using cplx = std::complex<double>;

// Atomic-medium constants. Time is in us, all rates and detunings in
// rad/us; MHz values convert as omega = 2 pi f.
struct MediumParams {
    double d = 500.0;        // half optical depth (resonant transmission e^{-2d})
    double gamma = 0.0;      // optical coherence decay (rad/us)
    double gamma_S = 0.0;    // spin decay (rad/us)

    MediumParams() : gamma(rb87_gamma()) {}
    MediumParams(double d_, double gamma_, double gamma_S_)
        : d(d_), gamma(gamma_), gamma_S(gamma_S_) {
        validate();
    }

    // Half the Rb-87 D1 natural linewidth, Gamma = 2 pi * 5.75 rad/us.
    static double rb87_gamma();

    void validate() const {
        if (!(d > 0.0)) throw invalid_parameter("MediumParams: d must be positive");
        if (!(gamma > 0.0)) throw invalid_parameter("MediumParams: gamma must be positive");
        if (gamma_S < 0.0) throw invalid_parameter("MediumParams: gamma_S must be >= 0");
    }
};

// One piecewise-constant control stage. The two-photon detuning at
// in-stage time tau (0 <= tau <= duration) and position z is
//   delta2(z, tau) = gradient z + quad z^2 + bias + chirp_rate (tau - duration/2).
struct Stage {
    std::string name;        // gem_store | hold | eit_recall | gem_recall | ...
    double duration = 0.0;   // us
    cplx omega = 0.0;        // control Rabi (rad/us)
    double delta = 0.0;      // one-photon detuning (rad/us)
    double gradient = 0.0;   // g (rad/us per unit z)
    double quad = 0.0;       // q (rad/us per unit z^2)
    double chirp_rate = 0.0; // rad/us^2, zero-mean over the stage
    double bias = 0.0;       // uniform two-photon offset (rad/us)

    double chirp(double tau) const { return chirp_rate * (tau - 0.5 * duration) + bias; }
    double two_photon(double z, double tau) const {
        return gradient * z + quad * z * z + chirp(tau);
    }
    // integral of the uniform (z-independent) detuning part over [a, b].
    double uniform_phase_integral(double a, double b) const {
        const double am = a - 0.5 * duration, bm = b - 0.5 * duration;
        return 0.5 * chirp_rate * (bm * bm - am * am) + bias * (b - a);
    }
    // Full chirp sweep |rate| * duration (rad/us), checked against the
    // atomic linewidth for EIT stages.
    double chirp_span() const { return std::abs(chirp_rate) * duration; }
};

// Protocol bookkeeping carried along with the stages so downstream target
// generation does not have to re-derive it.
struct ScheduleMeta {
    double theta_total = 0.0;  // phase-space rotation the schedule implements (rad)
    double t_scale = 1.0;      // FrFT dimensionless-time scale (us)
    double t_center_in = 0.0;  // phase-space time origin of the input
    double t_center_out = 0.0; // ... and of the output
    double w_i_mhz = 0.0;      // input bandwidth used by the builder
    double storage_bw_mhz = 0.0;
    double t_f = 0.0;          // recall duration (us)
    double v_g = 0.0;          // EIT group velocity (L per us), 0 if none
    double omega_eit = 0.0;    // calibrated EIT Rabi (rad/us), 0 if none
    bool conjugating = false;  // GEM-GEM recall conjugates the envelope
};

struct ControlSchedule {
    std::vector<Stage> stages;
    std::vector<std::string> warnings;
    ScheduleMeta meta;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : stages) t += s.duration;
        return t;
    }

    // Stage index and in-stage time for absolute t (clamped to the run).
    std::pair<std::size_t, double> locate(double t) const;

    void validate() const {
        if (stages.empty()) throw invalid_parameter("ControlSchedule: no stages");
        for (const auto& s : stages) {
            if (!(s.duration > 0.0))
                throw invalid_parameter("ControlSchedule: stage '" + s.name +
                                        "' has non-positive duration");
            if (!std::isfinite(s.duration) || !std::isfinite(s.gradient) ||
                !std::isfinite(s.quad) || !std::isfinite(s.chirp_rate) ||
                !std::isfinite(s.bias) || !std::isfinite(s.delta))
                throw invalid_parameter("ControlSchedule: non-finite stage field");
        }
    }

    double stage_start(std::size_t index) const {
        double t = 0.0;
        for (std::size_t i = 0; i < index; ++i) t += stages[i].duration;
        return t;
    }
};

} // namespace gemfrft

#endif
