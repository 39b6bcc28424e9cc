#ifndef GEMFRFT_FRFT_HPP
#define GEMFRFT_FRFT_HPP

#include "gemfrft/pulse.hpp"

namespace gemfrft {

// Fractional Fourier transform of order alpha acting on the dimensionless
// coordinate x = (t - center_in)/t_scale_in; output samples live at
// t' = center_out + x * t_scale_out. The kernel is the standard one,
//   K_a(x, x') = C_a exp( i (cot a / 2)(x^2 + x'^2) - i x x' / sin a ),
//   C_a = exp(-i (pi/4 sgn(sin a) - a/2)) / sqrt(2 pi |sin a|),
// whose Hermite-Gauss eigenvalues are exp(-i n a).
struct FrftSpec {
    double alpha = 0.0;
    double t_scale_in = 1.0;
    double t_scale_out = 1.0;
    double center_in = 0.0;
    double center_out = 0.0;

    void validate() const {
        if (!(t_scale_in > 0.0) || !(t_scale_out > 0.0))
            throw invalid_parameter("FrftSpec: time scales must be positive");
        if (!std::isfinite(alpha)) throw invalid_parameter("FrftSpec: alpha not finite");
    }
};

enum class FrftPath {
    direct,    // O(N^2) quadrature of the kernel
    chirp_fft, // chirp-multiply -> scaled Fourier transform (Bluestein) -> chirp-multiply
};

// Eigenphase sign of this kernel: F_a HG_n = exp(sign * i n a) HG_n with
// sign = -1. Measured once against the oracle (see tests) and used for all
// "expected phase n theta" comparisons.
inline constexpr double frft_eigenphase_sign = -1.0;

// Apply F_alpha. alpha is reduced mod 2 pi; |sin alpha| <= 1e-6 dispatches
// to the exact identity / parity special case. Throws resolution_error if
// the quadratic or cross phases advance by more than pi per sample.
PulseSignal frft_oracle(const PulseSignal& signal, const FrftSpec& spec,
                        FrftPath path = FrftPath::chirp_fft);

} // namespace gemfrft

#endif
