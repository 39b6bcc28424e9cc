#ifndef GEMFRFT_PULSE_HPP
#define GEMFRFT_PULSE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "gemfrft/grids.hpp"

namespace gemfrft {

using cplx = std::complex<double>;

// Complex optical envelope sampled on a uniform time grid.
struct PulseSignal {
    TimeGrid grid;
    std::vector<cplx> amplitude;

    PulseSignal() = default;
    PulseSignal(TimeGrid g, std::vector<cplx> a) : grid(g), amplitude(std::move(a)) {
        if (amplitude.size() != grid.n_samples)
            throw invalid_parameter("PulseSignal: amplitude length != grid.n_samples");
    }

    std::size_t size() const { return amplitude.size(); }
};

// Trapezoidal quadrature of |E|^2 dt.
double signal_energy(const PulseSignal& s);
double signal_norm(const PulseSignal& s); // sqrt(energy)

// Energy-weighted mean time <t> = integral t|E|^2 dt / energy.
double signal_centroid(const PulseSignal& s);

// Multiply amplitudes by a constant.
void scale_signal(PulseSignal& s, cplx factor);

// Rescale to unit energy; throws invalid_parameter on zero norm.
void normalize_signal(PulseSignal& s);

// L2 distance sqrt(integral |a-b|^2 dt); grids must match.
double l2_distance(const PulseSignal& a, const PulseSignal& b);

// inner product integral a * conj(b) dt (trapezoidal); grids must match.
cplx inner_product(const PulseSignal& a, const PulseSignal& b);

// Smallest interval [t_lo, t_hi], aligned to grid samples, containing
// `fraction` of the signal energy (bisection on a symmetric-in-energy
// shrink from the outside in).
struct EnergyExtent {
    double t_lo;
    double t_hi;
    double width() const { return t_hi - t_lo; }
};
EnergyExtent energy_extent(const PulseSignal& s, double fraction = 0.999);

// Natural-spline evaluation of the envelope at arbitrary time; zero
// outside the grid. Used to feed signals into the solver at whatever
// step the integrator runs on.
class SignalInterpolant {
public:
    explicit SignalInterpolant(const PulseSignal& s);
    cplx operator()(double t) const;

private:
    TimeGrid grid_;
    std::vector<cplx> y_;
    std::vector<cplx> m_; // second derivatives
};

} // namespace gemfrft

#endif
