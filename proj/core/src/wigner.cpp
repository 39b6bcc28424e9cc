#include "gemfrft/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "gemfrft/errors.hpp"
#include "gemfrft/fft.hpp"
#include "gemfrft/util.hpp"

namespace gemfrft {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Shared discrete WDF: samples y_i with spacing d, correlation at even
// lags tau = 2 m d, FFT over the lag index. `freq_scale` converts the DFT
// bin frequency (cycles per unit of axis1) to the stored axis2 unit, and
// `value_scale` the corresponding measure factor.
WignerMap wigner_core(const std::vector<cplx>& y, double a1_start, double d,
                      WignerMap::Kind kind, double freq_scale, double value_scale,
                      const WignerOptions& opt) {
    const std::size_t n = y.size();
    if (n < 8) throw invalid_parameter("wigner: signal too short");

    double peak = 0.0;
    for (const auto& v : y) peak = std::max(peak, std::abs(v));
    if (peak <= 0.0) throw invalid_parameter("wigner: zero signal");
    const double edge = std::max({std::abs(y.front()), std::abs(y[1]),
                                  std::abs(y[n - 1]), std::abs(y[n - 2])});
    if (edge > opt.edge_tolerance * peak)
        throw resolution_error("wigner: signal support reaches the grid edge; "
                               "correlation window would wrap (pad the signal)");

    const std::size_t m_fft = next_pow2(2 * n);
    const std::size_t half = m_fft / 2;

    WignerMap map;
    map.kind = kind;
    map.axis1 = {a1_start, d, n};
    // DFT bin df in cycles per axis1-unit: kernel e^{-2 pi i f (2 m d)} with
    // m the lag index -> f_l = l / (2 d m_fft), l in [-m_fft/2, m_fft/2).
    const double df_cycles = 1.0 / (2.0 * d * double(m_fft));
    map.axis2 = {-double(half) * df_cycles * freq_scale, df_cycles * freq_scale, m_fft};
    map.values.assign(n * m_fft, 0.0);

    // W(t_i, f) = 2 d sum_m y_{i+m} y*_{i-m} e^{-4 pi i f m d}; out-of-range
    // samples are zero. Rows are independent.
    auto do_rows = [&](std::size_t i_begin, std::size_t i_end) {
        std::vector<cplx> corr(m_fft);
        for (std::size_t i = i_begin; i < i_end; ++i) {
            std::fill(corr.begin(), corr.end(), cplx(0.0, 0.0));
            const std::size_t m_max = std::min(i, n - 1 - i);
            corr[0] = y[i] * std::conj(y[i]);
            for (std::size_t m = 1; m <= m_max; ++m) {
                const cplx c = y[i + m] * std::conj(y[i - m]);
                corr[m] = c;
                corr[m_fft - m] = std::conj(c);
            }
            auto spec = fft(corr);
            double* row = map.values.data() + i * m_fft;
            const double w = 2.0 * d * value_scale;
            // fftshift so axis2 ascends from -Nyquist.
            for (std::size_t l = 0; l < m_fft; ++l) {
                const std::size_t src = (l + half) % m_fft;
                row[l] = w * spec[src].real();
            }
        }
    };

    unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : opt.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        do_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned k = 0; k < threads; ++k) {
            const std::size_t b = k * chunk;
            const std::size_t e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(do_rows, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return map;
}

} // namespace

WignerMap wigner(const PulseSignal& signal, const WignerOptions& opt) {
    // axis2 in MHz (cycles/us): the DFT bin frequency already is cycles/us.
    return wigner_core(signal.amplitude, signal.grid.t_start, signal.grid.dt,
                       WignerMap::Kind::time_frequency, 1.0, 1.0, opt);
}

WignerMap wigner_spinwave(const std::vector<cplx>& spinwave, const WignerOptions& opt) {
    if (spinwave.size() < 8) throw invalid_parameter("wigner_spinwave: too few samples");
    const double dz = 1.0 / (double(spinwave.size()) - 1.0);
    // axis2 = k_z = 2 pi f_cycles; measure factor 1/(2 pi) keeps
    // integral W dk = |S|^2.
    return wigner_core(spinwave, 0.0, dz, WignerMap::Kind::space_wavenumber,
                       two_pi, 1.0 / two_pi, opt);
}

std::vector<double> WignerMap::marginal_axis2() const {
    std::vector<double> m(axis1.count, 0.0);
    for (std::size_t i = 0; i < axis1.count; ++i) {
        double acc = 0.0;
        const double* row = values.data() + i * axis2.count;
        for (std::size_t l = 0; l < axis2.count; ++l) acc += row[l];
        m[i] = acc * axis2.step;
    }
    return m;
}

double WignerMap::total() const {
    const auto m = marginal_axis2();
    double acc = 0.0;
    for (std::size_t i = 0; i < axis1.count; ++i) {
        const double w = (i == 0 || i + 1 == axis1.count) ? 0.5 : 1.0;
        acc += w * m[i];
    }
    return acc * axis1.step;
}

double WignerMap::axis2_centroid() const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < axis1.count; ++i) {
        const double* row = values.data() + i * axis2.count;
        for (std::size_t l = 0; l < axis2.count; ++l) {
            num += row[l] * axis2.value(l);
            den += row[l];
        }
    }
    if (den == 0.0) throw invalid_parameter("WignerMap: zero total weight");
    return num / den;
}

void write_wigner_csv(const WignerMap& map, std::ostream& os) {
    os.precision(17);
    os << (map.kind == WignerMap::Kind::time_frequency ? "t_us\\f_mhz" : "z\\k_rad");
    for (std::size_t l = 0; l < map.axis2.count; ++l) os << ',' << map.axis2.value(l);
    os << '\n';
    for (std::size_t i = 0; i < map.axis1.count; ++i) {
        os << map.axis1.value(i);
        const double* row = map.values.data() + i * map.axis2.count;
        for (std::size_t l = 0; l < map.axis2.count; ++l) os << ',' << row[l];
        os << '\n';
    }
}

void write_wigner_csv(const WignerMap& map, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("write_wigner_csv: cannot open " + path);
    write_wigner_csv(map, os);
}

} // namespace gemfrft
