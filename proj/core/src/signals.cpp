#include "gemfrft/signals.hpp"

#include <cmath>
#include <sstream>
#include <numbers>

namespace gemfrft {

namespace {
constexpr double pi = std::numbers::pi;
}

double hermite_function(int n, double x) {
    return hermite_functions(n, x).back();
}

std::vector<double> hermite_functions(int n_max, double x) {
    // Normalized recurrence h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1},
    // seeded with the weighted ground state so no factorials appear.
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double h0 = std::exp(-0.5 * x * x) / std::pow(pi, 0.25);
    h[0] = h0;
    if (n_max == 0) return h;
    h[1] = std::sqrt(2.0) * x * h0;
    for (int k = 1; k < n_max; ++k)
        h[k + 1] = std::sqrt(2.0 / (k + 1.0)) * x * h[k] - std::sqrt(double(k) / (k + 1.0)) * h[k - 1];
    return h;
}

PulseSignal hg_mode(const HGParams& params, const TimeGrid& grid) {
    params.validate();
    std::vector<cplx> a(grid.n_samples);
    for (std::size_t i = 0; i < grid.n_samples; ++i) {
        const double x = (grid.t(i) - params.center) / params.sigma_t;
        a[i] = cplx(hermite_function(params.n, x), 0.0);
    }
    PulseSignal s(grid, std::move(a));
    // The recurrence yields the exactly unit-norm Hermite function, so the
    // on-grid energy directly measures the clipped tails.
    const double tail = 1.0 - signal_energy(s) / params.sigma_t;
    if (tail > 1e-3) {
        std::ostringstream os;
        os << "hg_mode: grid too short for HG_" << params.n << ": " << tail
           << " of the mode energy falls outside the grid";
        throw truncation_error(os.str());
    }
    normalize_signal(s);
    return s;
}

double hg_energy_halfwidth(int m, double fraction) {
    if (m < 0) throw invalid_parameter("hg_energy_halfwidth: m must be non-negative");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw invalid_parameter("hg_energy_halfwidth: fraction must be in (0,1)");
    // Cumulative energy of unit-scale HG_m inside [-a, a] via fine trapezoid
    // quadrature, then bisection on a. The integrand decays like exp(-x^2) so
    // a modest oversampling is ample for the 0.999 level.
    const double x_max = std::sqrt(2.0 * m + 1.0) + 8.0;
    const int n_pts = 20001;
    const double h = x_max / (n_pts - 1);
    std::vector<double> cum(n_pts, 0.0);
    double prev = 0.0, acc = 0.0;
    for (int i = 0; i < n_pts; ++i) {
        const double f = hermite_function(m, i * h);
        const double val = f * f;
        if (i > 0) acc += 0.5 * h * (prev + val);
        cum[i] = acc; // energy in [0, x_i] of the one-sided half
        prev = val;
    }
    const double total = cum[n_pts - 1]; // ~1/2 by normalization
    const double target = fraction * total;
    int lo = 0, hi = n_pts - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (cum[mid] < target ? lo : hi) = mid;
    }
    // Linear interpolation between bracketing samples.
    const double c0 = cum[lo], c1 = cum[hi];
    const double frac = (c1 > c0) ? (target - c0) / (c1 - c0) : 0.0;
    return (lo + frac) * h;
}

double mode_volume_scale(int m, double T_i, double fill_factor) {
    if (m < 1) throw invalid_parameter("mode_volume_scale: m must be >= 1");
    if (!(T_i > 0.0)) throw invalid_parameter("mode_volume_scale: T_i must be positive");
    if (!(fill_factor > 0.0 && fill_factor <= 1.0))
        throw invalid_parameter("mode_volume_scale: fill_factor must be in (0,1]");
    // Extent of HG_m is 2 a_m sigma_t with a_m the 99.9%-energy half-width;
    // set it equal to fill_factor * T_i.
    const double a_m = hg_energy_halfwidth(m);
    return fill_factor * T_i / (2.0 * a_m);
}

PulseSignal gaussian_pair(double separation, double sigma_t, const TimeGrid& grid) {
    if (separation < 0.0) throw invalid_parameter("gaussian_pair: separation must be >= 0");
    if (!(sigma_t > 0.0)) throw invalid_parameter("gaussian_pair: sigma_t must be positive");
    const double mid = grid.mid();
    const double c1 = mid - 0.5 * separation;
    const double c2 = mid + 0.5 * separation;
    const double guard = 4.5 * sigma_t;
    if (c1 - guard < grid.t_start || c2 + guard > grid.t_end())
        throw truncation_error("gaussian_pair: pulses truncated by grid edge");

    std::vector<cplx> a(grid.n_samples);
    for (std::size_t i = 0; i < grid.n_samples; ++i) {
        const double t = grid.t(i);
        const double u1 = (t - c1) / sigma_t;
        const double u2 = (t - c2) / sigma_t;
        a[i] = cplx(std::exp(-0.5 * u1 * u1) + std::exp(-0.5 * u2 * u2), 0.0);
    }
    PulseSignal s(grid, std::move(a));
    normalize_signal(s);
    return s;
}

double matched_bandwidth_mhz(double sigma_t, double T_i) {
    if (!(sigma_t > 0.0) || !(T_i > 0.0))
        throw invalid_parameter("matched_bandwidth_mhz: sigma_t and T_i must be positive");
    return T_i / (2.0 * pi * sigma_t * sigma_t);
}

} // namespace gemfrft
