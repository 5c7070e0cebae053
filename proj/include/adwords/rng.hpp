#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "instance.hpp"

namespace adwords {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Maps 64 random bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based generator: every draw is a pure function of (key, counter...),
/// so trial i produces the same numbers no matter which worker runs it.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        return mix64(mix64(mix64(key_ ^ mix64(a)) ^ b) ^ mix64(c + 0x632be59bd9b4e019ULL));
    }

    constexpr double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        return to_unit(bits(a, b, c));
    }

    /// Independent stream for a sub-experiment.
    constexpr CounterRng derive(std::uint64_t tag) const { return CounterRng(bits(tag, 0x5eed)); }

    /// Seed vector Y for trial `trial` over n resources.
    SeedVector seeds(std::uint64_t trial, std::size_t n) const {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = uniform(trial, i, 1);
        return SeedVector(std::move(y));
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

/// Sequential stream used by the instance generators. Wraps mt19937_64 with a
/// fixed bits-to-double mapping so output does not depend on the standard library.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : eng_(mix64(seed)) {}

    double uniform() { return to_unit(eng_()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Exponential with unit mean.
    double exponential() { return -std::log1p(-uniform()); }
    bool bernoulli(double p) { return uniform() < p; }
    /// Integer in [lo, hi].
    long long integer(long long lo, long long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(eng_() % span);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace adwords
