#include "gemfrft/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace gemfrft {

namespace {

// FFTW planning is not thread-safe; execution with fftw_execute_dft on
// caller-owned buffers is. Plans are cached per (size, direction).
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> tmp(n);
        auto* buf = reinterpret_cast<fftw_complex*>(tmp.data());
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE);
        plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

std::vector<cplx> fft(const std::vector<cplx>& x, bool inverse) {
    if (x.empty()) throw std::invalid_argument("fft: empty input");
    std::vector<cplx> out = x;
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan p = PlanCache::instance().get(x.size(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(p, buf, buf);
    return out;
}

std::vector<cplx> czt_centered(const std::vector<cplx>& x, std::size_t n_out,
                               double a, double j0, double k0) {
    const std::size_t n_in = x.size();
    if (n_in == 0) throw std::invalid_argument("czt_centered: empty input");
    // a (j-j0)(k-k0) = a/2 [ (j-j0)^2 + (k-k0)^2 - (j-k - (j0-k0))^2 ]
    const double half = 0.5 * a;
    const double d0 = j0 - k0;

    std::vector<cplx> u(n_in);
    for (std::size_t j = 0; j < n_in; ++j) {
        const double p = half * (j - j0) * (j - j0);
        u[j] = x[j] * cplx(std::cos(p), -std::sin(p));
    }

    // conv[k] = sum_j u_j v_{j-k} with v_m = exp(+i a/2 (m - d0)^2),
    // m = j - k in [-(n_out-1), n_in-1]. As a cyclic convolution this
    // needs the kernel stored reversed: V[(-m) mod N] = v_m.
    const std::size_t n_conv = next_pow2(n_in + n_out - 1);
    std::vector<cplx> U(n_conv, cplx(0.0, 0.0)), V(n_conv, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n_in; ++j) U[j] = u[j];
    for (std::size_t k = 0; k < n_out; ++k) {
        const double m = -static_cast<double>(k);
        const double p = half * (m - d0) * (m - d0);
        V[k] = cplx(std::cos(p), std::sin(p));
    }
    for (std::size_t j = 1; j < n_in; ++j) {
        const double m = static_cast<double>(j);
        const double p = half * (m - d0) * (m - d0);
        V[(n_conv - j) % n_conv] = cplx(std::cos(p), std::sin(p));
    }

    auto Uf = fft(U);
    auto Vf = fft(V);
    for (std::size_t i = 0; i < n_conv; ++i) Uf[i] *= Vf[i];
    auto conv = fft(Uf, true);
    const double scale = 1.0 / static_cast<double>(n_conv);

    std::vector<cplx> out(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double p = half * (k - k0) * (k - k0);
        const cplx w(std::cos(p), -std::sin(p));
        out[k] = conv[k] * scale * w;
    }
    return out;
}

} // namespace gemfrft
