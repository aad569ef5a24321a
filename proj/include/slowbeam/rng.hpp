#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace slowbeam {

// Deterministic RNG used everywhere in the toolkit. One global seed is
// combined with a module tag and a stream index (e.g. particle number), so
// independent streams can be derived reproducibly and work can be farmed out
// per index without sharing mutable state.
//
// Generation is hand-rolled (splitmix64 state advance, 53-bit uniforms,
// Box-Muller normals) so that byte-identical output does not depend on the
// standard library's distribution implementations.

namespace detail {

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view module,
                                   std::uint64_t index = 0) {
    std::uint64_t s = seed ^ detail::fnv1a64(module);
    detail::splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ull * (index + 1);
    return detail::splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // burn-in so trivially related seeds decorrelate
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(ang);
        have_cached_ = true;
        return r * std::cos(ang);
    }

    // Counting-statistics helper: Knuth below lambda = 30, Gaussian
    // approximation (rounded, clamped at 0) above.
    double poisson(double lambda) {
        if (lambda <= 0.0) return 0.0;
        if (lambda < 30.0) {
            double l = std::exp(-lambda);
            double p = 1.0;
            long k = 0;
            do {
                ++k;
                p *= uniform();
            } while (p > l);
            return static_cast<double>(k - 1);
        }
        double v = lambda + std::sqrt(lambda) * normal();
        return v < 0.0 ? 0.0 : std::round(v);
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace slowbeam
