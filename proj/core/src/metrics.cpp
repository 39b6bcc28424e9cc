#include "gemfrft/metrics.hpp"

#include <cmath>

#include "gemfrft/util.hpp"

namespace gemfrft {

MetricSet metrics(const PulseSignal& output, const PulseSignal& input,
                  const PulseSignal& target) {
    const double e_in = signal_energy(input);
    if (!(e_in > 0.0)) throw invalid_parameter("metrics: zero-norm input, efficiency undefined");

    const double e_out = signal_energy(output);
    double e_tgt = signal_energy(target);

    cplx overlap = 0.0;
    if (output.grid == target.grid) {
        overlap = inner_product(output, target);
    } else {
        if (std::abs(output.grid.dt - target.grid.dt) > 1e-9 * output.grid.dt)
            throw invalid_parameter("metrics: output/target grids not commensurate (dt differs)");
        // Evaluate the target on the output grid (spline, zero outside its
        // window) and integrate there.
        SignalInterpolant tgt(target);
        PulseSignal resampled;
        resampled.grid = output.grid;
        resampled.amplitude.resize(output.size());
        for (std::size_t i = 0; i < output.size(); ++i)
            resampled.amplitude[i] = tgt(output.grid.t(i));
        e_tgt = signal_energy(resampled);
        overlap = inner_product(output, resampled);
    }

    MetricSet ms;
    ms.overlap = overlap;
    ms.efficiency = e_out / e_in;
    if (e_out > 0.0 && e_tgt > 0.0) {
        ms.conditional_fidelity = std::norm(overlap) / (e_out * e_tgt);
        ms.eigenphase = wrap_pi(std::arg(overlap));
    }
    return ms;
}

} // namespace gemfrft
