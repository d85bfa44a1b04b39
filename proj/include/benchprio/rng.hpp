#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace benchprio {

/// Deterministic random source. All draws go through hand-rolled
/// transformations because the standard distributions are not specified
/// bit-for-bit; the mt19937_64 engine itself is.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Substream `index` derived from `seed`. Streams with distinct indices
    /// are statistically independent, so parallel consumers can each own one
    /// without changing the results of a serial run.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed + 0x9E3779B97F4A7C15ull * (index + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0,n). Mask-and-reject, no modulo bias.
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// Standard normal via Acklam's inverse-CDF approximation
    /// (relative error ~1e-9, plenty for synthetic data).
    double normal();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::vector<std::int32_t> permutation(std::int32_t n) {
        std::vector<std::int32_t> p(static_cast<std::size_t>(n));
        for (std::int32_t i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        shuffle(p);
        return p;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace benchprio
