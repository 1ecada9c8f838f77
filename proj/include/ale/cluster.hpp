#pragma once
// Cluster state for aggregate Loewner evolution: the cluster after n steps
// is encoded by its attachment history (theta_j, c_j), and the exterior map
// is the backward composition
//   Phi_n = F_1 o F_2 o ... o F_n,   F_j(z) = e^{i theta_j} F^{(c_j)}(e^{-i theta_j} z).
// Evaluation is therefore O(n) per point; derivatives accumulate as a
// complex log-sum and exponentiate once, so |Phi'| ~ e^{cap} never overflows
// mid-product.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ale/particle.hpp"
#include "ale/rng.hpp"

namespace ale {

enum class SigmaRule { Fixed, PowerOfC };

struct ModelParams {
    double eta = 0.0;    // harmonic-measure power
    double alpha = 0.0;  // capacity-feedback power (0 for the eta-family)
    double c = 0.0;      // base capacity per particle
    double T = 1.0;      // horizon in capacity time; run length n = floor(T/c)

    SigmaRule sigma_rule = SigmaRule::Fixed;
    double sigma_value = 0.0;  // sigma itself (Fixed) or the exponent q with sigma = c^q

    ParticleKind particle_kind = ParticleKind::Slit;
    cplx particle_gamma{0.0, 0.0};  // SpreadOut only

    double sigma() const {
        return sigma_rule == SigmaRule::Fixed ? sigma_value
                                              : std::pow(c, sigma_value);
    }

    ParticleMap base_particle() const {
        return particle_kind == ParticleKind::Slit
                   ? make_slit_map(c)
                   : make_spreadout_map(c, particle_gamma);
    }

    void validate() const {
        if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("params: c must lie in (0, 1]");
        if (!(T > 0.0)) throw std::invalid_argument("params: T must be > 0");
        const double s = sigma();
        if (s < 0.0) throw std::invalid_argument("params: sigma must be >= 0");
        if (s == 0.0 && (eta != 0.0 || alpha != 0.0))
            throw std::invalid_argument("params: sigma = 0 needs eta = alpha = 0 "
                                        "(the density/capacity rules evaluate Phi' on |z| = e^sigma)");
        base_particle();  // validates particle parameters
    }
};

// one attached particle; rotation and map are cached because every
// phi_eval walks the whole history
struct StepRecord {
    double theta = 0.0;
    cplx rot{1.0, 0.0};  // e^{i theta}
    ParticleMap map;
};

struct ClusterState {
    ModelParams params;
    double sigma = 0.0;  // materialized once at construction
    std::vector<StepRecord> history;
    Rng rng;
    double total_cap = 0.0;

    ClusterState() = default;
    ClusterState(const ModelParams& p, std::uint64_t seed) : params(p), rng(seed) {
        p.validate();
        sigma = p.sigma();
    }

    std::size_t n() const { return history.size(); }

    void append(double theta, double cap) {
        StepRecord rec;
        rec.theta = theta;
        rec.rot = cplx(std::cos(theta), std::sin(theta));
        rec.map = cap == params.c ? base_particle_cache()
                                  : params.base_particle().with_capacity(cap);
        history.push_back(rec);
        total_cap += cap;
    }

private:
    // alpha = 0 runs reuse one map object for every step
    const ParticleMap& base_particle_cache() const {
        if (!base_cached_) {
            base_ = params.base_particle();
            base_cached_ = true;
        }
        return base_;
    }
    mutable ParticleMap base_;
    mutable bool base_cached_ = false;
};

inline long steps_for_time(double t, double c) {
    if (t < 0.0) throw std::invalid_argument("steps_for_time: negative time");
    // guard against t/c = integer landing one ulp low
    return static_cast<long>(std::floor(t / c + 1e-9));
}

// default snapshot schedule: `count` evenly spaced times ending at T
inline std::vector<double> snapshot_times(double T, int count = 32) {
    std::vector<double> ts;
    for (int i = 1; i <= count; ++i) ts.push_back(T * i / static_cast<double>(count));
    return ts;
}

inline cplx phi_eval(const ClusterState& state, cplx z, std::size_t n_steps) {
    cplx w = z;
    for (std::size_t j = n_steps; j-- > 0;) {
        const StepRecord& s = state.history[j];
        w = s.rot * s.map.eval(std::conj(s.rot) * w);
    }
    return w;
}

inline cplx phi_eval(const ClusterState& state, cplx z) {
    return phi_eval(state, z, state.n());
}

// log Phi_n'(z) as a sum of per-factor principal logs (a branch of the log;
// exponentiating recovers Phi' exactly)
inline cplx phi_deriv_log(const ClusterState& state, cplx z, std::size_t n_steps) {
    cplx w = z, acc(0.0, 0.0), f, df;
    for (std::size_t j = n_steps; j-- > 0;) {
        const StepRecord& s = state.history[j];
        s.map.eval_with_deriv(std::conj(s.rot) * w, f, df);
        acc += std::log(df);
        w = s.rot * f;
    }
    return acc;
}

inline cplx phi_deriv_log(const ClusterState& state, cplx z) {
    return phi_deriv_log(state, z, state.n());
}

inline cplx phi_deriv(const ClusterState& state, cplx z, std::size_t n_steps) {
    return std::exp(phi_deriv_log(state, z, n_steps));
}

inline cplx phi_deriv(const ClusterState& state, cplx z) {
    return phi_deriv(state, z, state.n());
}

// value and derivative-log in one history walk
inline void phi_eval_with_deriv_log(const ClusterState& state, cplx z,
                                    std::size_t n_steps, cplx& value, cplx& dlog) {
    cplx w = z, acc(0.0, 0.0), f, df;
    for (std::size_t j = n_steps; j-- > 0;) {
        const StepRecord& s = state.history[j];
        s.map.eval_with_deriv(std::conj(s.rot) * w, f, df);
        acc += std::log(df);
        w = s.rot * f;
    }
    value = w;
    dlog = acc;
}

} // namespace ale
