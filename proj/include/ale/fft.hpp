#pragma once
// Minimal power-of-two complex FFT, iterative Cooley-Tukey.
// Sizes here never exceed a few thousand, and bit-identical replay matters
// more than peak throughput, so we keep our own ~50 lines instead of
// depending on an external FFT library.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ale {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place transform: sign = -1 gives X_j = sum_m x_m e^{-2pi i jm/N}
// (the usual forward DFT), sign = +1 the unscaled inverse.
inline void fft(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace ale
