#pragma once
// Fluctuation field of a cluster run and its Laurent-mode time series.
// The field at capacity time t is
//     field(t, z) = (e^{-c n(t)} Phi_{n(t)}(z) - z) / sqrt(c),
// i.e. the deviation from the exponentially growing disk, rescaled to the
// scale on which it has an order-one Gaussian limit. Its Laurent
// coefficients A~(t,k) are the empirical counterparts of the limiting
// Ornstein-Uhlenbeck modes.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ale/cluster.hpp"
#include "ale/laurent.hpp"

namespace ale {

inline cplx fluctuation_field(const ClusterState& state, double t, cplx z) {
    if (t > state.params.T * (1.0 + 1e-12))
        throw std::invalid_argument("fluctuation_field: t beyond the run horizon");
    const long n_t = steps_for_time(t, state.params.c);
    if (n_t > static_cast<long>(state.n()))
        throw std::invalid_argument("fluctuation_field: state has fewer steps than n(t)");
    if (n_t == 0) return cplx(0.0, 0.0);
    const double scale = std::exp(-state.params.c * static_cast<double>(n_t));
    return (scale * phi_eval(state, z, static_cast<std::size_t>(n_t)) - z) /
           std::sqrt(state.params.c);
}

// default extraction radius: outside the regularized circle and clear of
// particle-scale roughness
inline double default_extraction_radius(const ClusterState& state) {
    return std::max(std::exp(state.sigma), 1.0 + 4.0 * std::sqrt(state.params.c));
}

struct CoefficientProcess {
    std::vector<double> times;
    std::vector<LaurentSeries> snapshots;  // one series per time, same K and radius

    const LaurentSeries& at_time(double t) const {
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return snapshots[i];
        throw std::invalid_argument("CoefficientProcess: no snapshot at requested time");
    }
};

inline CoefficientProcess coefficient_process(const ClusterState& state,
                                              const std::vector<double>& times,
                                              int K, double r) {
    CoefficientProcess cp;
    cp.times = times;
    cp.snapshots.reserve(times.size());
    for (double t : times)
        cp.snapshots.push_back(
            laurent_extract([&](cplx z) { return fluctuation_field(state, t, z); }, r, K));
    return cp;
}

} // namespace ale
