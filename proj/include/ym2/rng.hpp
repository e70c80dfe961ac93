#pragma once
// Deterministic random number utilities.
//
// All randomness in the library flows from a single 64-bit base seed.
// Derivation rules:
//   * per-sample seed  : seed_i = base_seed ^ i          (sample index i)
//   * per-mode gaussian: counter-based splitmix64 stream, see gauss_at()
//
// The counter-based scheme makes every draw a pure function of
// (seed, counter), so evaluation order, thread count and mode-subset
// restrictions cannot change any value.

#include <cstdint>
#include <cmath>
#include <numbers>

namespace ym2 {

// splitmix64 (Steele, Lea, Flood 2014); standard finalizer-style mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of a (seed, counter) pair into one 64-bit word.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    return splitmix64(s);
}

// Uniform double in (0,1]; never returns 0 so log() below is safe.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

struct GaussPair {
    double a;
    double b;
};

// Two independent standard normals from counter `c` under `seed`
// (Box-Muller on two counter-derived uniforms).
inline GaussPair gauss_at(std::uint64_t seed, std::uint64_t c) {
    const double u1 = uniform01(mix64(seed, 2 * c));
    const double u2 = uniform01(mix64(seed, 2 * c + 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

// Small sequential convenience generator for test fixtures and oracles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    double next_uniform() { return uniform01(next_u64()); }

    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Per-sample seed derivation used by every Monte-Carlo harness.
inline std::uint64_t sample_seed(std::uint64_t base_seed, std::uint64_t index) {
    return base_seed ^ index;
}

}  // namespace ym2
