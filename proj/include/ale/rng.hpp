#pragma once
// Reproducible randomness. mt19937_64 has a standard-pinned sequence; the
// uniform/normal transforms are written out by hand because the std::
// distributions are implementation-defined and would break byte-identical
// replay of committed manifests across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace ale {

// SplitMix64 finalizer; used both to derive per-run seeds and to hash ids.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed derivation rule "xor-splitmix64-v1" (recorded in manifests).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return master ^ splitmix64(index);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0,1) with 53 random bits
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // standard normal, Box-Muller (pair cached)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ale
