#pragma once
// Basic particle maps: univalent F : {|z|>1} -> {|z|>1} with F(inf)=inf and
// F'(inf) = e^c, c the logarithmic capacity.
//
// Slit family    F = h^{-1}(e^c h(z)),  h(z) = z + 1/z + 2 = (z+1)^2/z.
//                h maps {|z|>1} onto C \ [0,4], so the image of F is the
//                exterior disk minus a radial slit [1, t], t + 1/t + 2 = 4e^c.
//                Capacity is exactly c by construction.
// Spread-out     F(z) = e^c z exp(2c/(gamma z - 1)), univalent into the
//                exterior disk iff |gamma| >= gamma_c = 1 + c + sqrt(2c+c^2).
//
// Branch handling for the slit inverse: h^{-1}(w) = (u + sqrt(u^2-4))/2 with
// u = w-2, where sqrt(u^2-4) is taken as sqrt(u-2)*sqrt(u+2) (principal
// branches). The product is continuous off the segment [-2,2]: when u+2 is a
// negative real so is u-2, and both principal roots flip sign together. For
// |z| > 1 the argument u = e^c h(z) - 2 never meets [-2,2], so the formula
// follows the analytic branch with h^{-1}(w) ~ w at infinity.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "ale/fft.hpp"

namespace ale {

// reciprocal without the libc complex-division scaling dance; safe for the
// moduli that occur here (everything lives in [1e-12, 1e12])
inline cplx cinv(cplx z) { return std::conj(z) * (1.0 / std::norm(z)); }

// principal complex sqrt, naive formulas; keeps signed-zero branch behaviour
// of std::sqrt and is ~4x faster. Valid away from over/underflow (|z| within
// ~1e+-150), which run-health bounds guarantee long before.
inline cplx csqrt_fast(cplx z) {
    const double a = z.real(), b = z.imag();
    const double r = std::sqrt(a * a + b * b);
    if (r == 0.0) return {0.0, b};
    if (a >= 0.0) {
        const double t = std::sqrt(0.5 * (r + a));
        return {t, b / (2.0 * t)};
    }
    const double u = std::sqrt(0.5 * (r - a));
    return {std::abs(b) / (2.0 * u), std::copysign(u, b)};
}

enum class ParticleKind { Slit, SpreadOut };

struct ParticleMap {
    ParticleKind kind = ParticleKind::Slit;
    double c = 0.0;        // logarithmic capacity
    cplx gamma{0.0, 0.0};  // SpreadOut shape parameter
    // cached slit data
    double ec = 1.0;       // e^c
    double ec_half = 1.0;  // e^{c/2}
    double tip = 1.0;      // slit endpoint t > 1, h(t) = 4e^c

    cplx eval(cplx z) const;
    cplx deriv(cplx z) const;
    void eval_with_deriv(cplx z, cplx& f, cplx& df) const;
    cplx log_ratio(cplx z) const;  // branch of log(F(z)/z) with limit c at inf
    double capacity() const;       // asymptotic read-off, returns ~c
    ParticleMap with_capacity(double c_new) const;
};

inline double spreadout_gamma_threshold(double c) {
    return 1.0 + c + std::sqrt(2.0 * c + c * c);
}

inline ParticleMap make_slit_map(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("slit map: capacity must be > 0");
    ParticleMap m;
    m.kind = ParticleKind::Slit;
    m.c = c;
    m.ec = std::exp(c);
    m.ec_half = std::exp(0.5 * c);
    // t + 1/t + 2 = 4e^c, root > 1
    m.tip = 2.0 * m.ec - 1.0 + 2.0 * m.ec_half * std::sqrt(m.ec - 1.0);
    return m;
}

inline ParticleMap make_spreadout_map(double c, cplx gamma) {
    if (!(c > 0.0)) throw std::invalid_argument("spread-out map: capacity must be > 0");
    if (std::abs(gamma) < spreadout_gamma_threshold(c) * (1.0 - 1e-12))
        throw std::invalid_argument("spread-out map: |gamma| below univalence threshold gamma(c)");
    ParticleMap m;
    m.kind = ParticleKind::SpreadOut;
    m.c = c;
    m.gamma = gamma;
    m.ec = std::exp(c);
    m.ec_half = std::exp(0.5 * c);
    return m;
}

inline ParticleMap ParticleMap::with_capacity(double c_new) const {
    return kind == ParticleKind::Slit ? make_slit_map(c_new)
                                      : make_spreadout_map(c_new, gamma);
}

namespace detail {
inline void require_exterior(cplx z) {
    // boundary points are tolerated (continuous extension); interior is not
    if (std::norm(z) < 1.0 - 1e-9)
        throw std::domain_error("particle map evaluated inside the unit disk");
}
} // namespace detail

inline void ParticleMap::eval_with_deriv(cplx z, cplx& f, cplx& df) const {
    detail::require_exterior(z);
    if (kind == ParticleKind::SpreadOut) {
        const cplx d = gamma * z - 1.0;
        const cplx id = cinv(d);
        f = ec * z * std::exp(2.0 * c * id);
        df = f * (cinv(z) - 2.0 * c * gamma * id * id);
        return;
    }
    // slit: h in the factored form (z+1)^2/z — the expanded z + 1/z + 2
    // cancels catastrophically near the fixed point z = -1
    const cplx iz = cinv(z);
    const cplx zp1 = z + 1.0;
    const cplx eh = ec * (zp1 * zp1 * iz);  // e^c h(z) = u + 2
    const cplx u = eh - 2.0;
    const cplx s = csqrt_fast(u - 2.0) * csqrt_fast(eh);
    f = 0.5 * (u + s);
    if (s == cplx(0.0, 0.0)) {
        // only at z = -1 (u = -2): removable; limit from h(F) = e^c h forces
        // (F')^2 = e^c there
        df = ec_half;
        return;
    }
    const cplx hp = (z - 1.0) * zp1 * iz * iz;  // h'(z) = (z-1)(z+1)/z^2
    df = 0.5 * ec * hp * (1.0 + u * cinv(s));
}

inline cplx ParticleMap::eval(cplx z) const {
    cplx f, df;
    if (kind == ParticleKind::SpreadOut) {
        detail::require_exterior(z);
        return ec * z * std::exp(2.0 * c * cinv(gamma * z - 1.0));
    }
    eval_with_deriv(z, f, df);
    return f;
}

inline cplx ParticleMap::deriv(cplx z) const {
    cplx f, df;
    eval_with_deriv(z, f, df);
    return df;
}

inline cplx ParticleMap::log_ratio(cplx z) const {
    detail::require_exterior(z);
    if (kind == ParticleKind::SpreadOut) {
        // exact closed form c(gamma z + 1)/(gamma z - 1), already the branch
        // that is continuous on {|z|>1} with limit c at infinity
        return c * (gamma * z + 1.0) * cinv(gamma * z - 1.0);
    }
    // Slit: unwrap log(F/z) along the radial path from the large-modulus
    // anchor 1e6*(z/|z|) inward to z, shrinking r-1 by 0.9 per step. At the
    // anchor the principal branch is already the right one (value ~ c).
    const double R_anchor = 1e6;
    const double rz = std::abs(z);
    const cplx dir = z / rz;
    const auto log_here = [&](cplx p, cplx prev) {
        cplx v = std::log(eval(p) * cinv(p));
        const double twopi = 6.28318530717958647692;
        const double k = std::round((prev.imag() - v.imag()) / twopi);
        v += cplx(0.0, twopi * k);
        if (std::abs(v.imag() - prev.imag()) > 1.5)
            throw std::runtime_error("slit log_ratio: branch tracking jump too large");
        return v;
    };
    if (rz >= R_anchor) return std::log(eval(z) * cinv(z));  // principal branch is safe out here
    cplx val = std::log(eval(R_anchor * dir) * cinv(R_anchor * dir));
    double rm1 = R_anchor - 1.0;
    // floor the walk target: for points on the circle itself (rz == 1, the
    // continuous boundary extension) the raw target is 0 and the geometric
    // shrink would stall in the denormals instead of terminating
    const double target = std::max(rz - 1.0, 1e-12);
    while (rm1 * 0.9 > target) {
        rm1 *= 0.9;
        val = log_here((1.0 + rm1) * dir, val);
    }
    return log_here(z, val);
}

inline double ParticleMap::capacity() const {
    // Mean of Re log(F/z) over 64 angles on |z| = 1e6: the circle mean kills
    // every z^{-k} term of the expansion exactly, so the read-off error is at
    // machine scale rather than the pointwise |a_0|/|z|.
    const int M = 64;
    double acc = 0.0;
    for (int k = 0; k < M; ++k) {
        const double th = 6.28318530717958647692 * k / M;
        acc += log_ratio(1e6 * cplx(std::cos(th), std::sin(th))).real();
    }
    return acc / M;
}

// rotated copy F_theta(z) = e^{i theta} F(e^{-i theta} z)
inline cplx rotated_eval(const ParticleMap& m, double theta, cplx z) {
    const cplx rot(std::cos(theta), std::sin(theta));
    return rot * m.eval(std::conj(rot) * z);
}

inline cplx rotated_deriv(const ParticleMap& m, double theta, cplx z) {
    const cplx rot(std::cos(theta), std::sin(theta));
    return m.deriv(std::conj(rot) * z);  // rotation factors cancel in F'
}

} // namespace ale
