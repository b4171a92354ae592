#pragma once

// Seeded generator with a platform-independent output sequence.
//
// std::mt19937_64 is fully specified by the standard, but the std::*_distribution
// adaptors are not, so uniform and normal variates are derived here from raw
// engine output. Two Rng objects built from the same seed produce identical
// streams on every conforming implementation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ontic {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    /// Independent stream for one case of an experiment. Depends only on
    /// (master, index), never on which worker runs the case.
    static Rng for_case(std::uint64_t master, std::uint64_t index) {
        Rng r;
        std::seed_seq seq{lo32(master), hi32(master), lo32(index), hi32(index), 0x6f6e7469u};
        r.engine_.seed(seq);
        return r;
    }

    void reseed(std::uint64_t seed) {
        std::seed_seq seq{lo32(seed), hi32(seed)};
        engine_.seed(seq);
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// True with probability p (exactly 0 for p <= 0, exactly 1 for p >= 1).
    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; one variate per call, no cached state.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    static std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
    static std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

    std::mt19937_64 engine_;
};

}  // namespace ontic
