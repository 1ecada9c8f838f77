#pragma once
// Laurent-coefficient extraction on circles. For f analytic and bounded on
// {|z| >= r} with expansion f(z) = sum_{k>=0} a_k z^{-k}, sampling on the
// circle of radius r gives
//   a_k = r^k * (1/M) sum_m f(r e^{i th_m}) e^{i k th_m},  th_m = 2 pi m / M,
// exact up to aliasing of order (r/r_analyticity)^M. Node count M = 4096
// covers every K used here (K <= 1024); larger K bumps M to the next power
// of two >= 4K so the sum can go through the FFT.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ale/fft.hpp"

namespace ale {

struct extraction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LaurentSeries {
    std::vector<cplx> coeffs;  // coeffs[k] multiplies z^{-k}
    double radius = 0.0;       // extraction radius

    int order() const { return static_cast<int>(coeffs.size()); }

    cplx eval(cplx z) const {
        cplx w = cinv_or_zero(z);
        cplx acc(0.0, 0.0);
        for (int k = order() - 1; k >= 0; --k) acc = acc * w + coeffs[k];
        return acc;
    }

    // geometric bound on the truncation error when re-evaluating at |z| = r2
    double tail_bound(double sup_f, double r2) const {
        const double q = radius / r2;
        return sup_f * std::pow(q, static_cast<double>(order())) / (1.0 - q);
    }

private:
    static cplx cinv_or_zero(cplx z) {
        const double n = std::norm(z);
        return n == 0.0 ? cplx(0.0, 0.0) : std::conj(z) * (1.0 / n);
    }
};

template <typename F>
LaurentSeries laurent_extract(F&& f, double r, int K) {
    if (!(r > 1.0)) throw std::invalid_argument("laurent_extract: radius must exceed 1");
    if (K <= 0) throw std::invalid_argument("laurent_extract: order must be positive");
    std::size_t M = 4096;
    while (M < 4 * static_cast<std::size_t>(K)) M *= 2;
    std::vector<cplx> samples(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double th = 6.28318530717958647692 * m / M;
        samples[m] = f(r * cplx(std::cos(th), std::sin(th)));
        if (!std::isfinite(samples[m].real()) || !std::isfinite(samples[m].imag()))
            throw extraction_error("laurent_extract: nonfinite sample on extraction circle");
    }
    fft(samples, +1);  // unscaled sum_m x_m e^{+2 pi i k m / M}
    LaurentSeries s;
    s.radius = r;
    s.coeffs.resize(K);
    double rk = 1.0;
    for (int k = 0; k < K; ++k) {
        s.coeffs[k] = samples[k] * (rk / static_cast<double>(M));
        rk *= r;
    }
    return s;
}

} // namespace ale
