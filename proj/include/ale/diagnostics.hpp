#pragma once
// Diagnostics tying a cluster run back to the limit statements: deviation of
// Phi_n from the growing disk, the per-particle increment and its exact
// Cauchy identity, the drift term and its linearization, the derivative
// threshold monitor, scaling regressions, and ensemble covariance
// estimators.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ale/cluster.hpp"
#include "ale/growth.hpp"
#include "ale/spectral.hpp"

namespace ale {

// -------------------------------------------------------------- deviation

struct DeviationRecord {
    double t = 0.0;
    double r = 0.0;
    double sup_dev = 0.0;    // grid sup of |Phi_n(re^{i th}) - e^{cap} re^{i th}|
    double norm2_dev = 0.0;  // 2-norm of the same
};

inline double capacity_at(const ClusterState& state, std::size_t n_steps) {
    double cap = 0.0;
    for (std::size_t j = 0; j < n_steps; ++j) cap += state.history[j].map.c;
    return cap;
}

inline DeviationRecord disk_deviation(const ClusterState& state, double t, double r,
                                      std::size_t M = 4096) {
    DeviationRecord rec;
    rec.t = t;
    rec.r = r;
    const std::size_t n_t = static_cast<std::size_t>(steps_for_time(t, state.params.c));
    if (n_t > state.n())
        throw std::invalid_argument("disk_deviation: state has fewer steps than n(t)");
    const double radius = std::exp(capacity_at(state, n_t));
    double sup = 0.0, sum2 = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double th = 6.28318530717958647692 * m / static_cast<double>(M);
        const cplx z = r * cplx(std::cos(th), std::sin(th));
        const double dev = std::abs(phi_eval(state, z, n_t) - radius * z);
        sup = std::max(sup, dev);
        sum2 += dev * dev;
    }
    rec.sup_dev = sup;
    rec.norm2_dev = std::sqrt(sum2 / static_cast<double>(M));
    return rec;
}

// ------------------------------------------------------------- increments

// error contributed by particle m+1 at angle theta:
//   Delta(theta, z) = Phi_m(e^{i theta} F(e^{-i theta} z)) - Phi_m(e^c z)
// with F the base particle; the theta-average vanishes exactly (Cauchy)
inline cplx increment_delta(const ClusterState& state, std::size_t m, double theta, cplx z) {
    if (m > state.n()) throw std::invalid_argument("increment_delta: m exceeds history");
    const ParticleMap base = state.params.base_particle();
    const cplx rot(std::cos(theta), std::sin(theta));
    const cplx attached = rot * base.eval(std::conj(rot) * z);
    return phi_eval(state, attached, m) - phi_eval(state, base.ec * z, m);
}

// quadrature mean (1/M) sum_j Delta(theta_j, z): an exact zero of the model,
// so the observed value measures quadrature + branch error only
inline cplx cauchy_mean(const ClusterState& state, std::size_t m, cplx z, std::size_t M = 4096) {
    const ParticleMap base = state.params.base_particle();
    const cplx ref = phi_eval(state, base.ec * z, m);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 6.28318530717958647692 * j / static_cast<double>(M);
        const cplx rot(std::cos(th), std::sin(th));
        acc += phi_eval(state, rot * base.eval(std::conj(rot) * z), m) - ref;
    }
    return acc / static_cast<double>(M);
}

// drift A(z) = mean_theta Delta(theta, z) h(theta) with h the attachment
// density of step m+1; pass the density in when it is already available
inline cplx drift_term(const ClusterState& state, std::size_t m, cplx z, std::size_t M,
                       const AngleDensity* density = nullptr) {
    AngleDensity local;
    if (density == nullptr) {
        ClusterState prefix = state;          // density depends on the first m maps only
        prefix.history.resize(m);
        local = attachment_density(prefix, M);
        density = &local;
    }
    if (density->M != M) throw std::invalid_argument("drift_term: density grid mismatch");
    const ParticleMap base = state.params.base_particle();
    const cplx ref = phi_eval(state, base.ec * z, m);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const double th = density->theta(j);
        const cplx rot(std::cos(th), std::sin(th));
        acc += (phi_eval(state, rot * base.eval(std::conj(rot) * z), m) - ref) * density->h[j];
    }
    return acc / static_cast<double>(M);
}

// ------------------------------------------------------------- thresholds

struct ThresholdReport {
    double nu = 0.0;
    double delta0 = 0.0;
    bool crossed = false;
    double first_crossing_t = -1.0;
    double max_norm = 0.0;  // largest snapshot value of ||Phi~'_n||_{inf, e^sigma}
    std::vector<std::pair<double, double>> trace;  // (t, norm) per snapshot
};

inline double threshold_delta0(double c, double sigma, double eta, double nu) {
    const double gap = std::exp(sigma) - 1.0;
    const double base = std::pow(c, 0.5 - nu);
    return eta == 1.0 ? base / (gap * std::sqrt(gap)) : base / gap;
}

// sup-norm of the rescaled derivative (e^{-cap} Phi'_n - 1)/sqrt(c) from
// precomputed Phi'_n values on the sigma-circle grid
inline double rescaled_deriv_supnorm(const std::vector<cplx>& phi_deriv_values, double cap,
                                     double c) {
    const double scale = std::exp(-cap);
    double sup = 0.0;
    for (const cplx& v : phi_deriv_values)
        sup = std::max(sup, std::abs(scale * v - 1.0));
    return sup / std::sqrt(c);
}

// standalone monitor over the default snapshot schedule (direct evaluation;
// the engine-integrated path in tools reuses the derivative tracker instead)
inline ThresholdReport threshold_monitor(const ClusterState& state, double nu,
                                         std::size_t M = 4096) {
    ThresholdReport rep;
    rep.nu = nu;
    rep.delta0 = threshold_delta0(state.params.c, state.sigma, state.params.eta, nu);
    const double rho = std::exp(state.sigma);
    for (double t : snapshot_times(state.params.T)) {
        const std::size_t n_t = static_cast<std::size_t>(steps_for_time(t, state.params.c));
        if (n_t > state.n()) break;
        std::vector<cplx> vals(M);
        for (std::size_t m = 0; m < M; ++m) {
            const double th = 6.28318530717958647692 * m / static_cast<double>(M);
            vals[m] = std::exp(phi_deriv_log(state, rho * cplx(std::cos(th), std::sin(th)), n_t));
        }
        const double norm = rescaled_deriv_supnorm(vals, capacity_at(state, n_t), state.params.c);
        rep.trace.emplace_back(t, norm);
        rep.max_norm = std::max(rep.max_norm, norm);
        if (!rep.crossed && norm > rep.delta0) {
            rep.crossed = true;
            rep.first_crossing_t = t;
        }
    }
    return rep;
}

// ------------------------------------------------------------ regressions

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline RegressionResult scaling_regression(const std::vector<std::pair<double, double>>& records) {
    std::vector<double> xs, ys;
    for (const auto& [c, stat] : records) {
        if (!(c > 0.0) || !(stat > 0.0))
            throw std::invalid_argument("scaling_regression: needs positive (c, statistic) pairs");
        xs.push_back(std::log(c));
        ys.push_back(std::log(stat));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("scaling_regression: needs >= 3 distinct c values");
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    RegressionResult res;
    res.slope = vxy / vxx;
    res.intercept = (sy - res.slope * sx) / n;
    res.r_squared = vyy == 0.0 ? 1.0 : (vxy * vxy) / (vxx * vyy);
    return res;
}

// ------------------------------------------------------------- covariance

struct CovarianceEstimate {
    double estimate = 0.0;
    double stderr_jack = 0.0;  // leave-one-out jackknife standard error
};

namespace detail {
inline CovarianceEstimate moment_with_jackknife(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    double sum = 0.0;
    for (double s : samples) sum += s;
    CovarianceEstimate est;
    est.estimate = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double s : samples) {
        const double loo = (sum - s) / static_cast<double>(n - 1);
        ss += (loo - est.estimate) * (loo - est.estimate);
    }
    est.stderr_jack = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
    return est;
}
} // namespace detail

// diagonal average of the empirical E[A~(s,k) (x) A~(t,k)] over an ensemble
inline CovarianceEstimate covariance_estimator(const std::vector<CoefficientProcess>& ensemble,
                                               double s, double t, int k) {
    if (ensemble.size() < 50)
        throw std::invalid_argument("covariance_estimator: ensemble too small (< 50 runs)");
    std::vector<double> samples;
    samples.reserve(ensemble.size());
    for (const auto& cp : ensemble) {
        const cplx a_s = cp.at_time(s).coeffs.at(k);
        const cplx a_t = cp.at_time(t).coeffs.at(k);
        samples.push_back(0.5 * (a_s.real() * a_t.real() + a_s.imag() * a_t.imag()));
    }
    return detail::moment_with_jackknife(samples);
}

// cross-mode second moment (should vanish: modes are asymptotically
// independent)
inline CovarianceEstimate cross_mode_estimator(const std::vector<CoefficientProcess>& ensemble,
                                               double t, int k1, int k2) {
    if (ensemble.size() < 50)
        throw std::invalid_argument("cross_mode_estimator: ensemble too small (< 50 runs)");
    std::vector<double> samples;
    samples.reserve(ensemble.size());
    for (const auto& cp : ensemble) {
        const cplx a = cp.at_time(t).coeffs.at(k1);
        const cplx b = cp.at_time(t).coeffs.at(k2);
        samples.push_back(0.5 * (a.real() * b.real() + a.imag() * b.imag()));
    }
    return detail::moment_with_jackknife(samples);
}

} // namespace ale
