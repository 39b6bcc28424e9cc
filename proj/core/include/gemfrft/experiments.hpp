#ifndef GEMFRFT_EXPERIMENTS_HPP
#define GEMFRFT_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gemfrft/protocols.hpp"
#include "gemfrft/wigner.hpp"

namespace gemfrft {

// Batch-sweep description. theta_list holds total phase-space rotations:
// for gem_eit rows theta in (0, pi) maps to ft_sign = +1 and
// theta_extra = theta - pi/2; for gem_gem rows theta itself is the
// (conjugated) rotation and must stay below pi/2.
struct SweepSpec {
    std::vector<ProtocolKind> protocols = {ProtocolKind::gem_eit};
    std::vector<double> theta_list;
    std::vector<int> n_list;
    int m = 10;
    std::vector<int> m_list; // efficiency-vs-m sweeps (n = m rows)
    double t_i = 10.0;
    double kappa = 0.8;
    double omega_gem = ProtocolSpec::default_omega_gem();
    double chirp_scale_in = 1.0;
    double chirp_scale_out = 1.0;
    double dt = 1e-3;
    std::size_t n_z = 0;   // 0 = resolution rule from the stored wavenumbers
    unsigned threads = 1;  // worker pool size; tables are identical for any value
    std::string output_dir = ".";

    void validate() const;
};

struct ResultRow {
    std::string protocol; // "gem_eit" | "gem_gem"
    double theta = 0.0;   // total rotation (rad)
    int n = 0;
    int m = 1;
    double efficiency = 0.0;
    double cond_fidelity = 0.0;
    double eigenphase = 0.0;      // referenced to the n = 0 run of the same theta
    double expected_phase = 0.0;  // sign-convention-fixed n * theta
    std::string status = "ok";    // "ok" or an error code
    double wall_time_s = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    void sort_canonical();
    void write_csv(std::ostream& os) const;
    void write_csv(const std::string& path) const;
    static ResultTable read_csv(const std::string& path);
    static const char* csv_header();
};

// Eigenphase sweep over (theta, n): each row records metrics against the
// oracle target; eigenphase is referenced to the HG_0 run of the same
// protocol and angle, which carries the protocol's global phase.
ResultTable run_eigenphase_sweep(const SweepSpec& spec, const MediumParams& medium);

// Fidelity / efficiency sweep over (theta, n), plus efficiency-vs-m rows
// (n = m) when m_list is non-empty.
ResultTable run_fidelity_efficiency_sweep(const SweepSpec& spec, const MediumParams& medium);

struct ShowcaseResult {
    WignerMap input_map;
    WignerMap output_map;
    WignerMap spinwave_map; // stored spinwave at the end of the storage stage
    PulseSignal input;
    PulseSignal output;
    PulseSignal target;
    MetricSet scores;
    double lobe_angle = 0.0; // principal axis of the positive output WDF (rad, mod pi)
};

// Gaussian-pair rotation demo: runs the protocol at total rotation theta
// on `input` (the Gaussian pair) and returns phase-space maps, intensity
// traces and the measured lobe axis in matched (square-aspect) units.
ShowcaseResult run_showcase(double theta_total, const PulseSignal& input,
                            const MediumParams& medium, const SweepSpec& spec);

// Least-squares fits of log(eta) against the two scaling laws c/m and
// c exp(-a sqrt(m)); lower rss wins.
struct ScalingFit {
    double rss_c_over_m = 0.0;
    double rss_exp_sqrt = 0.0;
    double exp_sqrt_a = 0.0;
};
ScalingFit fit_efficiency_scaling(const std::vector<int>& ms, const std::vector<double>& etas);

// Slope of phase(n) by unwrapped linear least squares (phase through n = 0).
double eigenphase_slope(const std::vector<int>& ns, const std::vector<double>& phases);

// Principal-axis angle of the positive part of a Wigner map, measured in
// square-aspect coordinates x = (t - t0)/t_scale, y = 2 pi f t_scale.
double wigner_lobe_angle(const WignerMap& map, double t_center, double t_scale);

// Resolution rule: spatial samples needed to resolve the largest stored
// wavenumber |g| (T_i + kappa T_i / 2) plus the mode's own spread.
std::size_t auto_n_z(const ProtocolSpec& spec);

// Convenience: the HG_n input signal used by all sweeps (centred at
// t_i/2, matched bandwidth). Returns the signal and fills the protocol
// fields (w_i_mhz) of `proto`.
PulseSignal sweep_input_hg(int n, int m, double t_i, double kappa, double dt,
                           ProtocolSpec& proto);

} // namespace gemfrft

#endif
