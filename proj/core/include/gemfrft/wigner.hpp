#ifndef GEMFRFT_WIGNER_HPP
#define GEMFRFT_WIGNER_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gemfrft/pulse.hpp"

namespace gemfrft {

struct AxisDesc {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    double value(std::size_t i) const { return start + step * double(i); }
};

// Real phase-space density over (axis1, axis2), row-major in axis1.
// Conventions:
//   time-frequency:  W(t,f) = integral E(t+tau/2) E*(t-tau/2) e^{-2 pi i f tau} dtau,
//                    axis2 in MHz (cycles per us); integral W df = |E(t)|^2.
//   space-wavenumber: kernel e^{-i k xi}, axis2 = k_z in rad per unit z,
//                    values carry the 1/(2 pi) measure factor so that
//                    integral W dk = |S(z)|^2 pointwise.
struct WignerMap {
    enum class Kind { time_frequency, space_wavenumber };
    Kind kind = Kind::time_frequency;
    AxisDesc axis1; // t (us) or z (dimensionless)
    AxisDesc axis2; // f (MHz) or k_z (rad)
    std::vector<double> values; // [i1 * axis2.count + i2]

    double at(std::size_t i1, std::size_t i2) const { return values[i1 * axis2.count + i2]; }

    // Marginal over axis2 (trapezoid would be inexact for the cyclic
    // frequency axis; a plain Riemann sum is the exact inverse here).
    std::vector<double> marginal_axis2() const;

    // integral over both axes (signal norm for a well-padded map).
    double total() const;

    // Centroid of axis2 weighted by the (signed) density.
    double axis2_centroid() const;
};

// Number of worker threads for the column loop; results are bit-identical
// to the serial path for any value. 0 = hardware concurrency.
struct WignerOptions {
    unsigned threads = 1;
    // Relative edge amplitude above which the correlation window is
    // declared wrapped (signal insufficiently padded).
    double edge_tolerance = 0.1;
};

// Wigner distribution of a time signal. Throws resolution_error when the
// signal is not padded (support reaching the grid edges would wrap the
// correlation window).
WignerMap wigner(const PulseSignal& signal, const WignerOptions& opt = {});

// Wigner distribution of a spinwave S(z) sampled uniformly on [0, 1].
WignerMap wigner_spinwave(const std::vector<cplx>& spinwave, const WignerOptions& opt = {});

// CSV export: header row with axis2 values, then one row per axis1 sample
// (leading column = axis1 value). 17 significant digits.
void write_wigner_csv(const WignerMap& map, std::ostream& os);
void write_wigner_csv(const WignerMap& map, const std::string& path);

} // namespace gemfrft

#endif
