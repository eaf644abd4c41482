#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace landalloc {

// Portable random stream. The std distributions are implementation-defined,
// so draws are derived from the raw mt19937_64 output to keep runs
// bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n)
    {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw = engine_();
        while (draw >= limit) {
            draw = engine_();
        }
        return static_cast<std::size_t>(draw % bound);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Independent child stream; used to hand each worker its own generator.
    Rng split() { return Rng(engine_() ^ 0x9E3779B97F4A7C15ULL); }

private:
    std::mt19937_64 engine_;
};

} // namespace landalloc
