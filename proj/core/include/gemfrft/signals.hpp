#ifndef GEMFRFT_SIGNALS_HPP
#define GEMFRFT_SIGNALS_HPP

#include <cstddef>
#include <vector>

#include "gemfrft/pulse.hpp"

namespace gemfrft {

// Hermite-Gauss test-signal parameters. sigma_t is the temporal scale of
// the dimensionless argument x = (t - center)/sigma_t; mode_volume m is
// the bandwidth-scaling index such that modes up to HG_m fit the storage
// window (see mode_volume_scale).
struct HGParams {
    int n = 0;
    double sigma_t = 1.0;
    double center = 0.0;
    int mode_volume = 1;

    void validate() const {
        if (n < 0) throw invalid_parameter("HGParams: n must be non-negative");
        if (!(sigma_t > 0.0)) throw invalid_parameter("HGParams: sigma_t must be positive");
        if (mode_volume < 1) throw invalid_parameter("HGParams: mode_volume must be >= 1");
        if (n > mode_volume)
            throw invalid_parameter("HGParams: n exceeds mode_volume");
    }
};

// Unit-norm Hermite function h_n(x) exp(-x^2/2) * pi^{-1/4} / sqrt(2^n n!),
// evaluated by the stable normalized recurrence.
double hermite_function(int n, double x);

// All orders 0..n_max at one x (single recurrence pass).
std::vector<double> hermite_functions(int n_max, double x);

// Order-n Hermite-Gauss mode, normalized to unit energy on the grid.
// Throws truncation_error if the grid clips the mode (span shorter than
// +-5 sigma_t sqrt(2n+1) around center, or tail energy beyond the grid).
PulseSignal hg_mode(const HGParams& params, const TimeGrid& grid);

// Temporal scale sigma_t such that the 99.9%-energy extent of HG_m equals
// fill_factor * T_i. Paired spectral scale is 1/(2 pi sigma_t), which
// keeps the HG_m Wigner map circular at the matched bandwidth.
double mode_volume_scale(int m, double T_i, double fill_factor = 0.8);

// Half-width (in units of sigma) of the symmetric interval holding
// `fraction` of the energy of unit-scale HG_m. Computed by quadrature +
// bisection; used by mode_volume_scale and the protocol bandwidth rule.
double hg_energy_halfwidth(int m, double fraction = 0.999);

// Two equal Gaussians at +-separation/2 about the grid midpoint,
// unit total energy. separation = 0 degenerates to a single Gaussian.
PulseSignal gaussian_pair(double separation, double sigma_t, const TimeGrid& grid);

// Matched memory bandwidth (MHz) for a signal of temporal scale sigma_t
// stored over T_i: the bandwidth at which the signal's Wigner map is
// circular in the memory's (time, frequency) aspect, B = T_i/(2 pi sigma_t^2).
// This contains the 99.9% spectral extent with the same fill factor that
// the time window has.
double matched_bandwidth_mhz(double sigma_t, double T_i);

} // namespace gemfrft

#endif
