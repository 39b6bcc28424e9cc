#include "gemfrft/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace gemfrft {

namespace {

// Trapezoid weights: dt everywhere, dt/2 at the ends.
inline double trap_weight(std::size_t i, std::size_t n, double dt) {
    return (i == 0 || i + 1 == n) ? 0.5 * dt : dt;
}

} // namespace

double signal_energy(const PulseSignal& s) {
    double e = 0.0;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        e += trap_weight(i, n, s.grid.dt) * std::norm(s.amplitude[i]);
    return e;
}

double signal_norm(const PulseSignal& s) { return std::sqrt(signal_energy(s)); }

double signal_centroid(const PulseSignal& s) {
    double e = 0.0, m = 0.0;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = trap_weight(i, n, s.grid.dt) * std::norm(s.amplitude[i]);
        e += w;
        m += w * s.grid.t(i);
    }
    if (e <= 0.0) throw invalid_parameter("signal_centroid: zero-energy signal");
    return m / e;
}

void scale_signal(PulseSignal& s, cplx factor) {
    for (auto& a : s.amplitude) a *= factor;
}

void normalize_signal(PulseSignal& s) {
    const double nrm = signal_norm(s);
    if (!(nrm > 0.0)) throw invalid_parameter("normalize_signal: zero-norm signal");
    scale_signal(s, 1.0 / nrm);
}

double l2_distance(const PulseSignal& a, const PulseSignal& b) {
    if (!(a.grid == b.grid)) throw invalid_parameter("l2_distance: grids differ");
    double e = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        e += trap_weight(i, n, a.grid.dt) * std::norm(a.amplitude[i] - b.amplitude[i]);
    return std::sqrt(e);
}

cplx inner_product(const PulseSignal& a, const PulseSignal& b) {
    if (!(a.grid == b.grid)) throw invalid_parameter("inner_product: grids differ");
    cplx acc = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        acc += trap_weight(i, n, a.grid.dt) * a.amplitude[i] * std::conj(b.amplitude[i]);
    return acc;
}

EnergyExtent energy_extent(const PulseSignal& s, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw invalid_parameter("energy_extent: fraction must be in (0,1)");
    const std::size_t n = s.size();
    std::vector<double> cum(n, 0.0);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e += trap_weight(i, n, s.grid.dt) * std::norm(s.amplitude[i]);
        cum[i] = e;
    }
    if (e <= 0.0) throw invalid_parameter("energy_extent: zero-energy signal");
    const double tail = 0.5 * (1.0 - fraction) * e;
    // First index with cum > tail, last index with cum < e - tail.
    std::size_t lo = 0;
    while (lo + 1 < n && cum[lo] < tail) ++lo;
    std::size_t hi = n - 1;
    while (hi > 0 && e - cum[hi] < tail) --hi;
    if (hi < lo) std::swap(hi, lo);
    return {s.grid.t(lo), s.grid.t(hi)};
}

SignalInterpolant::SignalInterpolant(const PulseSignal& s) : grid_(s.grid), y_(s.amplitude) {
    // Natural cubic spline second derivatives M_i (complex):
    //   M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2,
    // with M at both ends pinned to zero. Thomas algorithm.
    const std::size_t n = y_.size();
    m_.assign(n, cplx(0.0, 0.0));
    if (n < 3) return;
    const std::size_t ni = n - 2; // interior unknowns
    const double h = grid_.dt;
    std::vector<double> diag(ni, 4.0);
    std::vector<cplx> rhs(ni);
    for (std::size_t k = 0; k < ni; ++k)
        rhs[k] = 6.0 * (y_[k + 2] - 2.0 * y_[k + 1] + y_[k]) / (h * h);
    for (std::size_t k = 1; k < ni; ++k) {
        const double w = 1.0 / diag[k - 1];
        diag[k] -= w;
        rhs[k] -= w * rhs[k - 1];
    }
    m_[ni] = rhs[ni - 1] / diag[ni - 1];
    for (std::size_t k = ni - 1; k >= 1; --k)
        m_[k] = (rhs[k - 1] - m_[k + 1]) / diag[k - 1];
}

cplx SignalInterpolant::operator()(double t) const {
    if (t < grid_.t_start || t > grid_.t_end()) return {0.0, 0.0};
    const double h = grid_.dt;
    double fi = (t - grid_.t_start) / h;
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(fi), y_.size() - 2);
    const double a = (grid_.t(i + 1) - t) / h;
    const double b = 1.0 - a;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
}

} // namespace gemfrft
