#pragma once
// Reference Ornstein-Uhlenbeck machinery for the limiting coefficient
// processes: mode k relaxes at rate lambda_k = 1 + (1-eta)k and is driven by
// a complex Brownian motion whose real and imaginary parts are independent
// standard Brownian motions,
//     dA(t,k) = -lambda_k A(t,k) dt + sqrt(2) dB_k(t),  A(0,k) = 0.
// Transitions are sampled from the exact Gaussian law (no Euler bias), so
// comparisons against simulation carry Monte Carlo error only. The
// stationary per-component variance is 1/lambda and
//     E[A(s,k) conj-pair A(t,k)] diagonal = (e^{-l|s-t|} - e^{-l(s+t)})/l.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ale/fft.hpp"
#include "ale/rng.hpp"

namespace ale {

struct OUParams {
    double eta = 0.0;
    int k = 0;
    double lambda_k = 1.0;
};

inline OUParams ou_params(double eta, int k) {
    if (k < 0) throw std::invalid_argument("ou_params: mode index must be >= 0");
    return OUParams{eta, k, 1.0 + (1.0 - eta) * k};
}

inline cplx ou_exact_step(cplx a, double dt, const OUParams& params, Rng& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("ou_exact_step: dt must be > 0");
    const double l = params.lambda_k;
    const double decay = std::exp(-l * dt);
    const double sd = std::sqrt((1.0 - decay * decay) / l);  // per real component
    return decay * a + sd * cplx(rng.normal(), rng.normal());
}

// common diagonal entry of E[A(s,k) (x) A(t,k)] started from 0
inline double ou_covariance(double s, double t, const OUParams& params) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("ou_covariance: negative time");
    const double l = params.lambda_k;
    return (std::exp(-l * std::abs(s - t)) - std::exp(-l * (s + t))) / l;
}

// one sample of the limit field F(t,z) = sum_{k<K} A(t,k) z^{-k} on a grid,
// drawing each mode at its time-t marginal
inline std::vector<cplx> limit_field_sample(double t, const std::vector<cplx>& z_grid,
                                            int K, double eta, Rng& rng) {
    if (K <= 0) throw std::invalid_argument("limit_field_sample: K must be positive");
    double r_min = 0.0;
    for (const cplx& z : z_grid) {
        const double r = std::abs(z);
        if (!(r > 1.0)) throw std::invalid_argument("limit_field_sample: grid point inside closed unit disk");
        if (r_min == 0.0 || r < r_min) r_min = r;
    }
    if (!z_grid.empty()) {
        const double tail = std::pow(r_min, -static_cast<double>(K)) / (1.0 - 1.0 / r_min);
        if (!(tail < 1e-6))
            throw std::invalid_argument("limit_field_sample: truncation insufficient for grid radius");
    }
    std::vector<cplx> modes(K);
    for (int k = 0; k < K; ++k) {
        const OUParams p = ou_params(eta, k);
        const double sd = std::sqrt(ou_covariance(t, t, p));  // per component at time t
        modes[k] = sd * cplx(rng.normal(), rng.normal());
    }
    std::vector<cplx> out(z_grid.size());
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        const cplx w = std::conj(z_grid[i]) * (1.0 / std::norm(z_grid[i]));
        cplx acc(0.0, 0.0);
        for (int k = K - 1; k >= 0; --k) acc = acc * w + modes[k];
        out[i] = acc;
    }
    return out;
}

} // namespace ale
