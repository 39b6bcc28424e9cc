#ifndef GEMFRFT_FFT_HPP
#define GEMFRFT_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace gemfrft {

using cplx = std::complex<double>;

// In-order complex DFT, X_k = sum_j x_j exp(-2 pi i j k / N) (forward),
// no normalization. Backed by FFTW with an internal plan cache; safe to
// call from multiple threads.
std::vector<cplx> fft(const std::vector<cplx>& x, bool inverse = false);

// Generalized DFT (chirp-z / Bluestein): for arbitrary real `a`,
//   X_k = sum_j x_j exp(-i a (j - j0) (k - k0)),   k = 0..n_out-1.
// Evaluated in O(N log N) via chirp factorization and FFT convolution.
std::vector<cplx> czt_centered(const std::vector<cplx>& x, std::size_t n_out,
                               double a, double j0, double k0);

} // namespace gemfrft

#endif
