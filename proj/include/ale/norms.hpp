#pragma once
// Discrete circle norms ||f||_{p,r}: the p-th root of the angular mean of
// |f|^p on |z| = r, with p = inf meaning the grid supremum. Reported values
// are grid statistics at M nodes, not true suprema; M is part of the spec.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ale/fft.hpp"

namespace ale {

struct NormSpec {
    double p = 2.0;  // exponent in [1, inf]; use infinity() for the sup norm
    double r = 2.0;  // circle radius > 1
    std::size_t M = 4096;

    static constexpr double inf = std::numeric_limits<double>::infinity();
};

template <typename F>
double circle_norm(F&& f, const NormSpec& spec) {
    if (!(spec.r > 1.0)) throw std::invalid_argument("circle_norm: radius must exceed 1");
    if (!(spec.p >= 1.0)) throw std::invalid_argument("circle_norm: exponent must be >= 1");
    if (spec.M == 0) throw std::invalid_argument("circle_norm: zero nodes");
    double acc = 0.0;
    for (std::size_t m = 0; m < spec.M; ++m) {
        const double th = 6.28318530717958647692 * m / static_cast<double>(spec.M);
        const double mod = std::abs(f(spec.r * cplx(std::cos(th), std::sin(th))));
        if (!std::isfinite(mod)) throw std::runtime_error("circle_norm: nonfinite sample");
        if (spec.p == NormSpec::inf)
            acc = std::max(acc, mod);
        else
            acc += std::pow(mod, spec.p);
    }
    if (spec.p == NormSpec::inf) return acc;
    return std::pow(acc / static_cast<double>(spec.M), 1.0 / spec.p);
}

} // namespace ale
