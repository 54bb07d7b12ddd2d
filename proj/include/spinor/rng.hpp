#pragma once

#include <cstdint>

#include "spinor/constants.hpp"

namespace spinor {

/// Counter-based 64-bit generator. Each draw is a pure function of
/// (seed, counter), so any draw index can be evaluated independently and
/// chunked accumulations are reproducible regardless of evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    /// 64 mixed bits for draw index `counter`.
    [[nodiscard]] std::uint64_t bits(std::uint64_t counter) const {
        // splitmix64 finalizer over a Weyl sequence anchored at the seed.
        std::uint64_t z = seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    [[nodiscard]] double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform phase in (-pi, pi].
    [[nodiscard]] double uniform_phase(std::uint64_t counter) const {
        return pi - 2.0 * pi * uniform01(counter);
    }

    /// Uniform double in [lo, hi).
    [[nodiscard]] double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform01(counter);
    }

    /// Log-uniform double in [lo, hi), lo > 0.
    [[nodiscard]] double log_uniform(std::uint64_t counter, double lo, double hi) const {
        const double u = uniform01(counter);
        return lo * std::exp(u * std::log(hi / lo));
    }

private:
    std::uint64_t seed_;
};

}  // namespace spinor
