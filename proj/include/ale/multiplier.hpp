#pragma once
// Diagonal multipliers of the linearized coefficient evolution. One growth
// step acts on Laurent coefficient k (in expectation, to first order) as
// multiplication by
//     p(k) = e^{-c(k+1)} + c eta k e^{-sigma(k+1)},
// and the contraction analysis rewrites p(k) = e^{-c lambda_k} p0(k) with
// lambda_k = 1 + (1-eta) k, so p0(k) = e^{c(1+(1-eta)k)} p(k) for
// eta in [0,1]. For eta < 0 the factorization p0(k) = e^{c(k+1)} p(k) is
// used instead (lambda_k = k+1). For eta in [0,1] the monotone-envelope
// property
//     0 <= p0(k+1) <= p0(k) <= 1
// holds throughout the regularized regime sigma >= c; it fails for
// sigma << c, which is outside the regime the simulator accepts. For
// eta < 0 the sequence p0(k) = 1 + c eta k e^{(c-sigma)(k+1)} stays <= 1
// but is not monotone: it dips and recovers toward 1 once k > 1/(sigma-c).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ale/laurent.hpp"

namespace ale {

struct MultiplierSpec {
    double c = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    int K = 0;

    MultiplierSpec(double c_, double sigma_, double eta_, int K_)
        : c(c_), sigma(sigma_), eta(eta_), K(K_) {
        if (!(c > 0.0)) throw std::invalid_argument("multiplier: c must be > 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("multiplier: sigma must be > 0");
        if (K <= 0) throw std::invalid_argument("multiplier: K must be positive");
    }
};

inline double multiplier_p(const MultiplierSpec& spec, int k) {
    if (k < 0 || k >= spec.K) throw std::invalid_argument("multiplier_p: index out of range");
    return std::exp(-spec.c * (k + 1)) +
           spec.c * spec.eta * k * std::exp(-spec.sigma * (k + 1));
}

inline double multiplier_p0(const MultiplierSpec& spec, int k) {
    const double lambda_k = spec.eta < 0.0 ? double(k + 1)
                                           : 1.0 + (1.0 - spec.eta) * k;
    // merge the exponents before exponentiating: the naive product
    // e^{c lambda_k} * p(k) overflows once c(k+1) > 709 even though the
    // combined exponents stay bounded in the contractive regime
    const double e_contract = spec.c * lambda_k - spec.c * (k + 1);
    const double e_feedback = spec.c * lambda_k - spec.sigma * (k + 1);
    return std::exp(e_contract) + spec.c * spec.eta * k * std::exp(e_feedback);
}

inline LaurentSeries apply_P(LaurentSeries series, const MultiplierSpec& spec, long n) {
    if (series.order() > spec.K)
        throw std::invalid_argument("apply_P: series order exceeds multiplier range");
    for (int k = 0; k < series.order(); ++k)
        series.coeffs[k] *= std::pow(multiplier_p(spec, k), static_cast<double>(n));
    return series;
}

struct MonotonicityReport {
    bool passed = true;
    int first_violation = -1;  // smallest k where the envelope fails
    double p0_at_violation = 0.0;
};

inline MonotonicityReport p0_monotonicity_check(const MultiplierSpec& spec) {
    MonotonicityReport rep;
    double prev = 1.0;  // envelope requires p0(0) <= 1, so seed with 1
    for (int k = 0; k < spec.K; ++k) {
        const double p0 = multiplier_p0(spec, k);
        if (!(p0 >= 0.0) || p0 > prev * (1.0 + 1e-14)) {
            rep.passed = false;
            rep.first_violation = k;
            rep.p0_at_violation = p0;
            return rep;
        }
        prev = p0;
    }
    return rep;
}

} // namespace ale
