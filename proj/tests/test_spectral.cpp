#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ale/growth.hpp"
#include "ale/norms.hpp"
#include "ale/spectral.hpp"

using namespace ale;

namespace {
ModelParams uniform_params(double c, double T) {
    ModelParams p;
    p.c = c;
    p.T = T;
    p.eta = 0.0;
    p.sigma_rule = SigmaRule::Fixed;
    p.sigma_value = 0.0;
    return p;
}
} // namespace

TEST_CASE("fluctuation field vanishes before the first particle") {
    const ClusterState st = run(uniform_params(0.01, 0.5), 2);
    REQUIRE(fluctuation_field(st, 0.0, cplx(2.0, 0.0)) == cplx(0.0, 0.0));
    REQUIRE(fluctuation_field(st, 0.005, cplx(2.0, 0.0)) == cplx(0.0, 0.0));  // n(t) = 0
}

TEST_CASE("fluctuation field rejects times it cannot serve") {
    const ClusterState st = run(uniform_params(0.01, 0.5), 2);
    REQUIRE_THROWS_AS(fluctuation_field(st, 0.6, cplx(2.0, 0.0)), std::invalid_argument);

    // horizon says t is legal but the history was never grown that far
    ClusterState empty(uniform_params(0.01, 1.0), 3);
    REQUIRE_THROWS_AS(fluctuation_field(empty, 0.5, cplx(2.0, 0.0)), std::invalid_argument);
}

TEST_CASE("fluctuation field settles to its constant term in the far field") {
    const ClusterState st = run(uniform_params(0.01, 1.0), 6);
    const cplx near = fluctuation_field(st, 1.0, cplx(1e6, 0.0));
    const cplx far = fluctuation_field(st, 1.0, cplx(1e7, 0.0));
    REQUIRE(std::abs(near - far) < 1e-4);
    REQUIRE(std::abs(near) < 100.0);
}

TEST_CASE("field two-norms stay order one for uniform attachment") {
    // the OU limit keeps mode variances <= 1/lambda_k; 10 is far outside
    // anything a healthy run produces (measured range 1.0 - 3.0)
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const ClusterState st = run(uniform_params(1e-3, 1.0), seed);
        NormSpec ns;
        ns.p = 2.0;
        ns.r = 2.0;
        ns.M = 1024;
        const double nrm =
            circle_norm([&](cplx z) { return fluctuation_field(st, 1.0, z); }, ns);
        REQUIRE(nrm < 10.0);
        REQUIRE(nrm > 1e-3);
    }
}

TEST_CASE("extracted coefficients evaluate back to the field") {
    const ClusterState st = run(uniform_params(0.01, 0.5), 12);
    const double r = default_extraction_radius(st);
    const CoefficientProcess cp = coefficient_process(st, {0.25, 0.5}, 64, r);
    REQUIRE(cp.times.size() == 2);
    const LaurentSeries& s = cp.at_time(0.5);
    REQUIRE(s.order() == 64);

    NormSpec sup_spec;
    sup_spec.p = NormSpec::inf;
    sup_spec.r = r;
    sup_spec.M = 2048;
    const double sup_f =
        circle_norm([&](cplx z) { return fluctuation_field(st, 0.5, z); }, sup_spec);
    const cplx z = 2.0 * r * cplx(std::cos(0.8), std::sin(0.8));
    const double tol = s.tail_bound(sup_f, 2.0 * r) + 1e-8;
    REQUIRE(std::abs(s.eval(z) - fluctuation_field(st, 0.5, z)) < tol);

    REQUIRE_THROWS_AS(cp.at_time(0.3), std::invalid_argument);
}

TEST_CASE("histories symmetric about the real axis give real coefficients") {
    // attachment only at angles 0 and pi makes Phi commute with conjugation,
    // so every Laurent coefficient of the field is real
    ModelParams p = uniform_params(0.05, 1.0);
    ClusterState st(p, 1);
    for (double th : {0.0, 3.14159265358979323846, 0.0, 3.14159265358979323846, 0.0})
        st.append(th, p.c);
    const double t = 5 * 0.05;
    const CoefficientProcess cp = coefficient_process(st, {t}, 8, 1.5);
    for (const cplx& a : cp.at_time(t).coeffs) REQUIRE(std::abs(a.imag()) < 1e-13);
}

TEST_CASE("mode energies add up to the squared circle norm") {
    // Parseval on |z| = r: mean |f|^2 = sum_k |a_k|^2 r^{-2k}
    LaurentSeries s;
    s.radius = 2.0;
    Rng rng(8);
    for (int k = 0; k < 16; ++k)
        s.coeffs.push_back(cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
    NormSpec ns;
    ns.p = 2.0;
    ns.r = 2.0;
    ns.M = 4096;
    const double nrm = circle_norm([&](cplx z) { return s.eval(z); }, ns);
    double sum = 0.0;
    double r2k = 1.0;
    for (int k = 0; k < 16; ++k) {
        sum += std::norm(s.coeffs[k]) * r2k;
        r2k /= 4.0;
    }
    REQUIRE(std::abs(nrm - std::sqrt(sum)) < 1e-12);
}

TEST_CASE("default extraction radius clears both safety margins") {
    ModelParams p = uniform_params(1e-4, 0.1);
    const ClusterState flat(p, 1);
    REQUIRE(default_extraction_radius(flat) == 1.0 + 4.0 * std::sqrt(1e-4));

    ModelParams ps = uniform_params(1e-4, 0.1);
    ps.sigma_value = 0.5;  // e^sigma dominates the particle-scale margin
    const ClusterState wide(ps, 1);
    REQUIRE(default_extraction_radius(wide) == std::exp(0.5));
}
