#pragma once

#include <cstdint>
#include <random>

namespace bksvm {

/// Seeded 64-bit generator with portable distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard library distributions are implementation-defined,
/// so every variate here is derived from raw engine output by a fixed
/// recipe; identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Unbiased integer in [0, bound) by rejection; bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    /// ±1 with equal probability.
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

    /// Standard normal via Box–Muller; the second variate of each pair is cached.
    double normal();
    /// Gamma(shape, 1) by Marsaglia–Tsang; shape must be > 0.
    double gamma(double shape);
    /// Chi-distributed with k degrees of freedom: sqrt(2·Gamma(k/2)).
    double chi(double k);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace bksvm
