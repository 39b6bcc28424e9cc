#include "gemfrft/schedule.hpp"

#include "gemfrft/util.hpp"

namespace gemfrft {

double MediumParams::rb87_gamma() { return pi * 5.75; }

std::pair<std::size_t, double> ControlSchedule::locate(double t) const {
    double t0 = 0.0;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const double t1 = t0 + stages[i].duration;
        if (t < t1 || i + 1 == stages.size()) return {i, std::max(0.0, t - t0)};
        t0 = t1;
    }
    return {stages.size() - 1, stages.back().duration};
}

} // namespace gemfrft
