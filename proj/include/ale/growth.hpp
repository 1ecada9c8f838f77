#pragma once
// Growth dynamics: attachment density, angle sampling, capacity rule, and
// the stepping engine.
//
// The density h_n(theta) = |Phi'_{n-1}(e^{sigma + i theta})|^{-eta} / Z_n
// requires Phi' on the whole sigma-circle every step. Walking the history
// for every grid node is O(n M) per step — O(n^2 M) per run, hopeless at
// n ~ 10^3..10^4. The engine instead carries Phi'_n restricted to the circle
// as a CircleSeries and advances it with the chain rule:
//     Phi'_{n+1}(z) = Phi'_n(F_{n+1}(z)) * F'_{n+1}(z),
// evaluating the series at F_{n+1}(node) (legal: |F(z)| >= |z| = rho) and
// refitting by FFT. Cost per step is O(M_eval K). Safety nets:
//   - alias check after every refit; node count doubles until the top
//     quarter of the spectrum is below 1e-10 of the peak,
//   - a from-scratch refit (direct history walk) every 256 steps, so
//     incremental error cannot compound past a few hundred multiplications,
//   - run-health bounds on |Phi'| at every density evaluation.
// Correctness of the fast path is pinned to the direct path by tests; the
// exact phi_deriv remains the reference everywhere accuracy matters more
// than speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ale/circle.hpp"
#include "ale/cluster.hpp"

namespace ale {

struct run_health_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- density

struct AngleDensity {
    std::size_t M = 0;          // uniform angles th_m = 2 pi m / M
    std::vector<double> h;      // normalized weights, discrete mean exactly 1
    double Z = 1.0;             // normalization (mean of raw weights)

    double theta(std::size_t m) const { return 6.28318530717958647692 * m / static_cast<double>(M); }
};

inline std::size_t density_grid_size(double c) {
    // at least 16 cells per particle angular scale ~ sqrt(c)
    std::size_t M = 4096;
    while (static_cast<double>(M) < 16.0 / std::sqrt(c)) M *= 2;
    return M;
}

namespace detail {

inline void check_deriv_health(double mod) {
    if (!std::isfinite(mod) || mod < 1e-8 || mod > 1e8)
        throw run_health_error("|Phi'| = " + std::to_string(mod) +
                               " on the sigma-circle: outside the double-precision trust region "
                               "(sigma too small for the current cluster roughness?)");
}

inline AngleDensity density_from_moduli(const std::vector<double>& mod, double eta) {
    AngleDensity d;
    d.M = mod.size();
    d.h.resize(d.M);
    double sum = 0.0;
    for (std::size_t m = 0; m < d.M; ++m) {
        check_deriv_health(mod[m]);
        d.h[m] = std::pow(mod[m], -eta);
        sum += d.h[m];
    }
    d.Z = sum / static_cast<double>(d.M);
    if (!(d.Z > 0.0) || !std::isfinite(d.Z))
        throw run_health_error("attachment density: degenerate normalization");
    for (auto& w : d.h) w /= d.Z;
    return d;
}

} // namespace detail

// direct (history-walk) density; exact reference, O(n M)
inline AngleDensity attachment_density(const ClusterState& state, std::size_t M) {
    if (M < 64 || !is_pow2(M))
        throw std::invalid_argument("attachment_density: grid must be a power of two >= 64");
    const double rho = std::exp(state.sigma);
    std::vector<double> mod(M);
    if (state.params.eta == 0.0 || state.n() == 0) {
        std::fill(mod.begin(), mod.end(), 1.0);
    } else {
        for (std::size_t m = 0; m < M; ++m) {
            const double th = 6.28318530717958647692 * m / static_cast<double>(M);
            mod[m] = std::exp(phi_deriv_log(state, rho * cplx(std::cos(th), std::sin(th))).real());
        }
    }
    return detail::density_from_moduli(mod, state.params.eta);
}

// inverse-CDF draw over the trapezoidal cumulative of h with linear
// interpolation of the density inside each cell; one uniform consumed
inline double sample_angle(const AngleDensity& density, Rng& rng) {
    const std::size_t M = density.M;
    if (M == 0) throw std::invalid_argument("sample_angle: empty density");
    const double width = 6.28318530717958647692 / static_cast<double>(M);

    // cell masses (h_m + h_{m+1})/2M sum to 1 up to rounding; rescale so the
    // CDF ends exactly at 1
    std::vector<double> cdf(M + 1);
    cdf[0] = 0.0;
    for (std::size_t m = 0; m < M; ++m)
        cdf[m + 1] = cdf[m] + 0.5 * (density.h[m] + density.h[(m + 1) % M]);
    const double total = cdf[M];
    if (!(total > 0.0)) throw run_health_error("sample_angle: zero-mass density");

    const double u = rng.uniform() * total;
    const std::size_t cell =
        static_cast<std::size_t>(std::upper_bound(cdf.begin() + 1, cdf.end(), u) - (cdf.begin() + 1));
    const std::size_t m = std::min(cell, M - 1);

    const double h0 = density.h[m], h1 = density.h[(m + 1) % M];
    const double mass = 0.5 * (h0 + h1);
    double s;
    if (mass <= 0.0) {
        s = 0.5;
    } else {
        const double v = (u - cdf[m]) / mass;          // mass fraction inside the cell
        const double dlt = h1 - h0;
        if (std::abs(dlt) < 1e-12 * (h0 + h1)) {
            s = v;
        } else {
            // solve h0 s + dlt s^2 / 2 = v * mass for s in [0,1]
            const double disc = h0 * h0 + 2.0 * dlt * v * mass;
            s = (std::sqrt(std::max(disc, 0.0)) - h0) / dlt;
        }
    }
    double theta = (static_cast<double>(m) + std::clamp(s, 0.0, 1.0)) * width;
    if (theta >= 6.28318530717958647692) theta -= 6.28318530717958647692;
    return theta;
}

// c_n = c |Phi'_{n-1}(e^{sigma + i theta})|^{-alpha}; exact c when alpha = 0
inline double capacity_rule(const ClusterState& state, double theta) {
    if (state.params.alpha == 0.0 || state.n() == 0) return state.params.c;
    const double rho = std::exp(state.sigma);
    const double mod =
        std::exp(phi_deriv_log(state, rho * cplx(std::cos(theta), std::sin(theta))).real());
    detail::check_deriv_health(mod);
    return state.params.c * std::pow(mod, -state.params.alpha);
}

// ------------------------------------------------- incremental derivative

// Phi'_n on the sigma-circle, advanced step-by-step (see file header)
class DerivTracker {
public:
    DerivTracker() = default;

    DerivTracker(double rho, double sigma) : rho_(rho) {
        std::size_t M = 64;
        while (static_cast<double>(M) * sigma < 40.0 && M < kMaxNodes) M *= 2;
        series_.rho = rho;
        series_.ghat.assign(1, cplx(1.0, 0.0));  // Phi'_0 = 1
        series_.fit_size = M;
        nodes_target_ = M;
        max_nodes_used_ = M;
    }

    const CircleSeries& series() const { return series_; }
    std::size_t nodes() const { return nodes_target_; }
    std::size_t max_nodes_used() const { return max_nodes_used_; }
    long refits() const { return direct_refits_; }

    // chain-rule advance by the particle just appended to the state;
    // call immediately after ClusterState::append
    void advance(const ClusterState& state) {
        const StepRecord& rec = state.history.back();
        for (;;) {
            std::vector<cplx> v(nodes_target_);
            cplx f, df;
            for (std::size_t m = 0; m < nodes_target_; ++m) {
                const double th = 6.28318530717958647692 * m / static_cast<double>(nodes_target_);
                const cplx z = rho_ * cplx(std::cos(th), std::sin(th));
                rec.map.eval_with_deriv(std::conj(rec.rot) * z, f, df);
                v[m] = series_.eval(rec.rot * f) * df;
            }
            CircleSeries next = CircleSeries::fit(rho_, std::move(v));
            if (next.alias_ratio() < 1e-10 || nodes_target_ >= kMaxNodes) {
                if (next.alias_ratio() >= 1e-3)
                    throw run_health_error("derivative tracker: spectrum does not decay on the "
                                           "sigma-circle even at the node cap");
                next.truncate(1e-15);
                series_ = std::move(next);
                break;
            }
            nodes_target_ *= 2;  // undersampled: refine and redo from the old series
            max_nodes_used_ = std::max(max_nodes_used_, nodes_target_);
        }
        if (++steps_since_refit_ >= kRefitInterval) refit_direct(state);
    }

    // from-scratch fit via the exact composition; also the drift bound reset
    void refit_direct(const ClusterState& state) {
        std::vector<cplx> v(nodes_target_);
        for (std::size_t m = 0; m < nodes_target_; ++m) {
            const double th = 6.28318530717958647692 * m / static_cast<double>(nodes_target_);
            v[m] = std::exp(phi_deriv_log(state, rho_ * cplx(std::cos(th), std::sin(th))));
        }
        CircleSeries next = CircleSeries::fit(rho_, std::move(v));
        next.truncate(1e-15);
        series_ = std::move(next);
        steps_since_refit_ = 0;
        ++direct_refits_;
    }

    // |Phi'_n| on a uniform density grid of size M_out (power of two)
    std::vector<double> moduli_on_grid(std::size_t M_out) const {
        const std::size_t M_fine = std::max(M_out, series_.fit_size);
        std::vector<cplx> vals = series_.grid_values(M_fine);
        const std::size_t stride = M_fine / M_out;
        std::vector<double> mod(M_out);
        for (std::size_t m = 0; m < M_out; ++m) mod[m] = std::abs(vals[m * stride]);
        return mod;
    }

    // complex values on the grid (threshold monitor needs Phi', not |Phi'|)
    std::vector<cplx> values_on_grid(std::size_t M_out) const {
        const std::size_t M_fine = std::max(M_out, series_.fit_size);
        std::vector<cplx> vals = series_.grid_values(M_fine);
        if (M_fine == M_out) return vals;
        const std::size_t stride = M_fine / M_out;
        std::vector<cplx> out(M_out);
        for (std::size_t m = 0; m < M_out; ++m) out[m] = vals[m * stride];
        return out;
    }

private:
    static constexpr std::size_t kMaxNodes = 1u << 16;
    static constexpr long kRefitInterval = 256;

    double rho_ = 1.0;
    CircleSeries series_;
    std::size_t nodes_target_ = 0;
    std::size_t max_nodes_used_ = 0;
    long steps_since_refit_ = 0;
    long direct_refits_ = 0;
};

// ------------------------------------------------------------------ engine

class GrowthEngine {
public:
    GrowthEngine(const ModelParams& params, std::uint64_t seed)
        : state_(params, seed),
          M_density_(density_grid_size(params.c)),
          needs_deriv_(params.eta != 0.0 || params.alpha != 0.0) {
        if (needs_deriv_ || track_always_)
            tracker_ = DerivTracker(std::exp(state_.sigma), state_.sigma);
    }

    // monitors and snapshot diagnostics can demand tracking even for eta = 0
    void enable_tracking() {
        if (!tracking()) {
            tracker_ = DerivTracker(std::exp(state_.sigma), state_.sigma);
            if (state_.n() > 0) tracker_.refit_direct(state_);
            track_always_ = true;
        }
    }

    bool tracking() const { return needs_deriv_ || track_always_; }
    const ClusterState& state() const { return state_; }
    ClusterState& state() { return state_; }
    const DerivTracker& tracker() const { return tracker_; }
    std::size_t density_grid() const { return M_density_; }

    AngleDensity current_density() {
        if (state_.params.eta == 0.0 || state_.n() == 0) {
            AngleDensity d;
            d.M = M_density_;
            d.h.assign(M_density_, 1.0);
            d.Z = 1.0;
            return d;
        }
        return detail::density_from_moduli(tracker_.moduli_on_grid(M_density_),
                                           state_.params.eta);
    }

    // one growth step: density -> angle -> capacity -> append
    void step() {
        const AngleDensity d = current_density();
        const double theta = sample_angle(d, state_.rng);
        double cap = state_.params.c;
        if (state_.params.alpha != 0.0 && state_.n() > 0) {
            const double mod = std::abs(tracker_.series().eval(
                std::exp(state_.sigma) * cplx(std::cos(theta), std::sin(theta))));
            detail::check_deriv_health(mod);
            cap = state_.params.c * std::pow(mod, -state_.params.alpha);
        }
        state_.append(theta, cap);
        if (tracking()) tracker_.advance(state_);
    }

    void run_steps(long n) {
        for (long i = 0; i < n; ++i) step();
    }

private:
    ClusterState state_;
    std::size_t M_density_;
    bool needs_deriv_ = false;
    bool track_always_ = false;
    DerivTracker tracker_;
};

// one-call convenience: evolve for n(T) = floor(T/c) steps
inline ClusterState run(const ModelParams& params, std::uint64_t seed) {
    GrowthEngine engine(params, seed);
    engine.run_steps(steps_for_time(params.T, params.c));
    return engine.state();
}

} // namespace ale
