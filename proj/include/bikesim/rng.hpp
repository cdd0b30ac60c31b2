#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bikesim {

// Seeded PRNG with hand-rolled distributions. std:: distributions are
// implementation-defined, which would break byte-identical replay across
// standard library versions, so only the mt19937_64 engine is reused.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t nextU64() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Exponential with the given mean (inter-arrival gaps of a Poisson process).
    double exponential(double mean) {
        return -mean * std::log(1.0 - uniform01());
    }

private:
    std::mt19937_64 engine_;
};

// Deterministic seed derivation for batch runs (splitmix64 finalizer).
inline std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace bikesim
