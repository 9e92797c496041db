#pragma once

#include "bksvm/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bksvm {

/// One d×d block V = 1/(σ√d) · S·H·G·Π·H·B of a Fastfood projection.
struct FastfoodBlock {
    std::vector<std::int8_t> signs;      // diagonal of B, each ±1
    std::vector<std::uint32_t> perm;     // Π: (Πv)_i = v[perm[i]]
    std::vector<float> gauss;            // diagonal of G, iid N(0, 1)
    std::vector<float> scale;            // diagonal of S, each > 0

    bool operator==(const FastfoodBlock&) const = default;
};

/// Structured replacement for a d×p Gaussian projection with N(0, σ⁻²)
/// entries: ⌈p/d⌉ stacked independent blocks, output truncated to p.
///
/// Parameters are held at 32-bit precision so a serialized transform
/// reproduces apply() bit for bit.
class FastfoodTransform {
public:
    FastfoodTransform() = default;
    /// Validates block shapes and invariants; throws std::invalid_argument.
    FastfoodTransform(std::size_t d, std::size_t p, float sigma, std::uint64_t seed,
                      std::vector<FastfoodBlock> blocks);

    std::size_t input_dim() const { return d_; }
    std::size_t output_dim() const { return p_; }
    float sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<FastfoodBlock>& blocks() const { return blocks_; }

    /// R̃ᵀx; x must have length input_dim().
    std::vector<double> apply(std::span<const double> x) const;
    /// As apply(), writing into out (length output_dim()).
    void apply_into(std::span<const double> x, std::span<double> out) const;

    /// Storage for S, G, Π at 32 bits per entry plus B at one bit per entry.
    std::uint64_t memory_bits() const;

    bool operator==(const FastfoodTransform&) const = default;

private:
    std::size_t d_ = 0;
    std::size_t p_ = 0;
    float sigma_ = 1.0f;
    std::uint64_t seed_ = 0;
    std::vector<FastfoodBlock> blocks_;
};

/// Draws a transform from a fresh Rng(seed).
FastfoodTransform sample_transform(std::size_t d, std::size_t p, double sigma, std::uint64_t seed);

/// Draws from an existing stream. Per block, in order: the B signs, the
/// Fisher–Yates permutation, the G normals, then the chi(d) draws that
/// become S. `seed` is only recorded.
FastfoodTransform sample_transform(std::size_t d, std::size_t p, double sigma, std::uint64_t seed,
                                   Rng& rng);

/// Explicit p×d projection with iid N(0, σ⁻²) entries, row k producing
/// output k. Used by the RFE and BJLE baselines.
class GaussianProjection {
public:
    GaussianProjection(std::size_t d, std::size_t p, double sigma, Rng& rng);

    std::size_t input_dim() const { return d_; }
    std::size_t output_dim() const { return p_; }
    std::vector<double> apply(std::span<const double> x) const;
    std::uint64_t memory_bits() const { return std::uint64_t{32} * d_ * p_; }

private:
    std::size_t d_;
    std::size_t p_;
    std::vector<float> rows_;
};

}  // namespace bksvm
