#pragma once
#include <cstdint>
#include <random>

namespace hazard {

// Deterministic RNG with a documented algorithm: mt19937_64 seeded through
// splitmix64, with hand-rolled normal/gamma transforms so that draws are
// bit-identical across platforms and standard libraries (std distributions
// are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Decorrelated per-chain seed under a common run seed.
    static std::uint64_t stream_seed(std::uint64_t run_seed, std::uint64_t index);

    // Independent stream for chain `index` under a common run seed.
    static Rng for_chain(std::uint64_t run_seed, std::uint64_t index);

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform strictly inside (0,1); safe as a log() argument.
    double uniform_pos() {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return u;
    }

    // Standard normal via Marsaglia's polar method (no cached spare, so the
    // draw sequence is a pure function of the engine state).
    double normal();

    // Gamma(shape, rate) via Marsaglia–Tsang, with the shape<1 boost.
    double gamma(double shape, double rate);

    std::uint64_t raw() { return engine_(); }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix64(std::uint64_t&& x) {
        std::uint64_t t = x;
        return splitmix64(t);
    }

    std::mt19937_64 engine_;
};

} // namespace hazard
