#pragma once
// Truncated one-sided Fourier representation of an analytic function on and
// outside a circle. For g analytic on {|z| > 1} and bounded at infinity,
// restriction to |z| = rho > 1 has only nonpositive frequencies:
//   g(rho e^{i th}) = sum_{k>=0} ghat_k e^{-i k th},   ghat_k = b_k rho^{-k},
// where g(z) = sum b_k z^{-k}. Fitting ghat by FFT from grid samples and
// evaluating the polynomial in rho/z (|rho/z| <= 1 outside the circle) gives
// a representation that can be moved to any exterior point — the basis of
// the O(M log M)-per-step derivative tracking in the growth engine.
//
// Sampling at M nodes folds coefficients k >= M back onto the grid
// (aliasing); alias_ratio() exposes the top-quarter spectral mass so callers
// can detect undersampling and double M.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ale/fft.hpp"

namespace ale {

struct CircleSeries {
    double rho = 1.0;
    std::vector<cplx> ghat;      // possibly truncated below fit_size
    std::size_t fit_size = 0;    // FFT size the series was fitted with

    // g at any |z| >= rho: Horner in w = rho/z
    cplx eval(cplx z) const {
        const cplx w = rho * std::conj(z) * (1.0 / std::norm(z));
        cplx acc(0.0, 0.0);
        for (std::size_t k = ghat.size(); k-- > 0;) acc = acc * w + ghat[k];
        return acc;
    }

    static CircleSeries fit(double rho, std::vector<cplx> values) {
        CircleSeries s;
        s.rho = rho;
        s.fit_size = values.size();
        fft(values, +1);  // ghat_k = (1/M) sum_m v_m e^{+i k th_m}
        const double inv = 1.0 / static_cast<double>(values.size());
        for (auto& v : values) v *= inv;
        s.ghat = std::move(values);
        return s;
    }

    // grid samples on M_out uniform angles (M_out >= current size, power of
    // two): zero-pad the spectrum and transform back — exact for a series
    // that is genuinely band-limited to the stored modes
    std::vector<cplx> grid_values(std::size_t M_out) const {
        if (!is_pow2(M_out) || M_out < ghat.size())
            throw std::invalid_argument("CircleSeries::grid_values: M_out must be a power of two >= mode count");
        std::vector<cplx> a(M_out, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < ghat.size(); ++k) a[k] = ghat[k];
        fft(a, -1);  // v_j = sum_k ghat_k e^{-i k th_j}
        return a;
    }

    // max |ghat_k| over the top quarter of the fitted band, relative to the
    // peak; ~0 when the fit resolved the full spectrum, ~1 when aliased
    double alias_ratio() const {
        if (ghat.empty()) return 0.0;
        double peak = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < ghat.size(); ++k) {
            const double m = std::abs(ghat[k]);
            if (m > peak) peak = m;
            if (k >= fit_size - fit_size / 4 && m > tail) tail = m;
        }
        return peak == 0.0 ? 0.0 : tail / peak;
    }

    // drop trailing coefficients below eps * peak (speeds up eval; keeps the
    // represented function within eps * peak * (#dropped) pointwise)
    void truncate(double eps) {
        double peak = 0.0;
        for (const auto& g : ghat) peak = std::max(peak, std::abs(g));
        std::size_t keep = ghat.size();
        while (keep > 1 && std::abs(ghat[keep - 1]) < eps * peak) --keep;
        ghat.resize(keep);
    }
};

} // namespace ale
