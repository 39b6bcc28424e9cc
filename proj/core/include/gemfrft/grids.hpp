#ifndef GEMFRFT_GRIDS_HPP
#define GEMFRFT_GRIDS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "gemfrft/errors.hpp"

namespace gemfrft {

// Uniform time grid, times in microseconds.
struct TimeGrid {
    double t_start = 0.0;
    double dt = 0.0;
    std::size_t n_samples = 0;

    TimeGrid() = default;
    TimeGrid(double start, double step, std::size_t n) : t_start(start), dt(step), n_samples(n) {
        validate();
    }

    void validate() const {
        if (!(dt > 0.0)) throw invalid_parameter("TimeGrid: dt must be positive");
        if (n_samples < 2) throw invalid_parameter("TimeGrid: need at least 2 samples");
        if (!std::isfinite(t_start) || !std::isfinite(t_start + (double(n_samples) - 1.0) * dt))
            throw invalid_parameter("TimeGrid: non-finite span");
    }

    double t(std::size_t i) const { return t_start + double(i) * dt; }
    double t_end() const { return t(n_samples - 1); }
    double span() const { return (double(n_samples) - 1.0) * dt; }
    double mid() const { return t_start + 0.5 * span(); }

    std::vector<double> times() const {
        std::vector<double> v(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) v[i] = t(i);
        return v;
    }

    bool operator==(const TimeGrid& o) const {
        return t_start == o.t_start && dt == o.dt && n_samples == o.n_samples;
    }
};

// Uniform spatial grid on [0, L], L = 1 (dimensionless ensemble length).
struct SpaceGrid {
    std::size_t n_z = 512;
    static constexpr double L = 1.0;

    SpaceGrid() = default;
    explicit SpaceGrid(std::size_t n) : n_z(n) { validate(); }

    void validate() const {
        if (n_z < 64) throw invalid_parameter("SpaceGrid: n_z must be >= 64");
    }

    double dz() const { return L / (double(n_z) - 1.0); }
    double z(std::size_t j) const { return double(j) * dz(); }

    std::vector<double> points() const {
        std::vector<double> v(n_z);
        for (std::size_t j = 0; j < n_z; ++j) v[j] = z(j);
        return v;
    }
};

} // namespace gemfrft

#endif
