// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_RNG_HPP
#define LABELNOISE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace labelnoise {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Seeded random source. Substreams derived by purpose label are
/// statistically independent; the same (seed, label) pair always
/// reproduces the same draw sequence.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent substream for a named purpose ("noise", "init", "shuffle", ...).
    SeededRng substream(std::string_view label) const {
        return SeededRng(detail::splitmix64(seed_ ^ detail::fnv1a(label)));
    }

    /// Numbered substream, e.g. one per repeat or per batch.
    SeededRng substream(std::string_view label, std::uint64_t index) const {
        return SeededRng(detail::splitmix64(seed_ ^ detail::fnv1a(label)) + index);
    }

    std::mt19937_64& engine() { return engine_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    double gaussian(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Gamma(alpha, 1) via Marsaglia-Tsang squeeze for alpha >= 1,
/// boosted by a uniform power for alpha < 1.
inline double gamma_sample(SeededRng& rng, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("gamma_sample: alpha must be positive");
    if (alpha < 1.0) {
        const double g = gamma_sample(rng, alpha + 1.0);
        double u = rng.uniform();
        while (u == 0.0) u = rng.uniform();
        return g * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Symmetric Beta(alpha, alpha) draw in [0,1]. alpha = 0 degenerates to 1,
/// so mixing with the drawn factor leaves a sample unchanged.
inline double beta_sample(SeededRng& rng, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("beta_sample: alpha must be nonnegative");
    if (alpha == 0.0) return 1.0;
    const double g1 = gamma_sample(rng, alpha);
    const double g2 = gamma_sample(rng, alpha);
    return g1 / (g1 + g2);
}

}  // namespace labelnoise

#endif
