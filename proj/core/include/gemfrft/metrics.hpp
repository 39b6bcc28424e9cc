#ifndef GEMFRFT_METRICS_HPP
#define GEMFRFT_METRICS_HPP

#include "gemfrft/pulse.hpp"

namespace gemfrft {

struct MetricSet {
    double efficiency = 0.0;           // output energy / input energy
    double conditional_fidelity = 0.0; // |overlap|^2 / (out energy * target energy)
    double eigenphase = 0.0;           // arg(overlap), wrapped to (-pi, pi]
    cplx overlap = 0.0;                // integral out * conj(target) dt
};

// Scalar figures of merit of a simulated output against the input it came
// from and the desired target waveform. Output and target must share dt;
// if their windows differ the target is resampled onto the output grid by
// cubic spline (zero outside its support). Throws invalid_parameter for a
// zero-norm input (undefined efficiency).
MetricSet metrics(const PulseSignal& output, const PulseSignal& input,
                  const PulseSignal& target);

} // namespace gemfrft

#endif
