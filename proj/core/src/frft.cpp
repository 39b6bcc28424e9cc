#include "gemfrft/frft.hpp"

#include <algorithm>
#include <cmath>

#include "gemfrft/fft.hpp"
#include "gemfrft/util.hpp"

namespace gemfrft {

namespace {

constexpr double sin_eps = 1e-6;

PulseSignal identity_case(const PulseSignal& in, const FrftSpec& spec, bool parity) {
    const std::size_t n = in.size();
    const double ratio = spec.t_scale_out / spec.t_scale_in;
    // x grid of the input, mapped onto output times.
    const double x0 = (in.grid.t_start - spec.center_in) / spec.t_scale_in;
    const double dx = in.grid.dt / spec.t_scale_in;

    std::vector<cplx> a(n);
    const double amp = 1.0 / std::sqrt(ratio); // keeps the L2 norm
    if (!parity) {
        for (std::size_t i = 0; i < n; ++i) a[i] = amp * in.amplitude[i];
        TimeGrid g(spec.center_out + x0 * spec.t_scale_out, dx * spec.t_scale_out, n);
        return PulseSignal(g, std::move(a));
    }
    // Parity needs samples at -x; demand a grid symmetric about center_in.
    const double x_last = x0 + dx * (double(n) - 1.0);
    if (std::abs(x_last + x0) > 1e-9 * std::max(1.0, std::abs(x_last)))
        throw resolution_error("frft_oracle: parity case needs a grid symmetric about center_in");
    for (std::size_t i = 0; i < n; ++i) a[i] = amp * in.amplitude[n - 1 - i];
    TimeGrid g(spec.center_out + x0 * spec.t_scale_out, dx * spec.t_scale_out, n);
    return PulseSignal(g, std::move(a));
}

} // namespace

PulseSignal frft_oracle(const PulseSignal& in, const FrftSpec& spec, FrftPath path) {
    spec.validate();
    if (in.size() < 2) throw invalid_parameter("frft_oracle: signal too short");

    const double alpha = wrap_pi(spec.alpha);
    const double s = std::sin(alpha);
    if (std::abs(s) <= sin_eps) {
        // alpha ~ 0 -> identity; alpha ~ +-pi -> parity (HG eigenvalues (-1)^n).
        return identity_case(in, spec, std::abs(alpha) > pi / 2.0);
    }
    const double cot = std::cos(alpha) / s;

    const std::size_t n = in.size();
    const double dx = in.grid.dt / spec.t_scale_in;
    const double x0 = (in.grid.t_start - spec.center_in) / spec.t_scale_in;
    const double x_max = std::max(std::abs(x0), std::abs(x0 + dx * (double(n) - 1.0)));

    // Nyquist guards: quadratic phase cot/2 x^2 and cross phase x x'/sin
    // must advance < pi per sample.
    if (std::abs(cot) * x_max * dx > pi)
        throw resolution_error("frft_oracle: undersampled chirp (quadratic phase > pi per sample)");
    if (x_max * dx / std::abs(s) > pi)
        throw resolution_error("frft_oracle: undersampled kernel (cross phase > pi per sample)");

    // Output x grid mirrors the input x grid.
    const double j0 = -x0 / dx; // index of x = 0
    const cplx c_a = std::exp(cplx(0.0, -(pi / 4.0) * (s > 0 ? 1.0 : -1.0) + 0.5 * alpha)) /
                     std::sqrt(two_pi * std::abs(s));
    const cplx pref = c_a * dx * std::sqrt(spec.t_scale_in / spec.t_scale_out);

    std::vector<cplx> out(n);
    if (path == FrftPath::direct) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = x0 + dx * double(i);
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double phase = 0.5 * cot * (x[k] * x[k] + x[j] * x[j]) - x[k] * x[j] / s;
                acc += in.amplitude[j] * cplx(std::cos(phase), std::sin(phase));
            }
            out[k] = pref * acc;
        }
    } else {
        // Chirp-multiply, scaled Fourier transform (Bluestein), chirp-multiply.
        std::vector<cplx> u(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = x0 + dx * double(j);
            const double phase = 0.5 * cot * xj * xj;
            u[j] = in.amplitude[j] * cplx(std::cos(phase), std::sin(phase));
        }
        // sum_j u_j exp(-i x_k x_j / sin) with x = (idx - j0) dx.
        auto v = czt_centered(u, n, dx * dx / s, j0, j0);
        for (std::size_t k = 0; k < n; ++k) {
            const double xk = x0 + dx * double(k);
            const double phase = 0.5 * cot * xk * xk;
            out[k] = pref * v[k] * cplx(std::cos(phase), std::sin(phase));
        }
    }

    TimeGrid g(spec.center_out + x0 * spec.t_scale_out, dx * spec.t_scale_out, n);
    return PulseSignal(g, std::move(out));
}

} // namespace gemfrft
