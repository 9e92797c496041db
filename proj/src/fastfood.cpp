#include "bksvm/fastfood.hpp"

#include "bksvm/fwht.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bksvm {

namespace {

std::size_t block_count(std::size_t d, std::size_t p) { return (p + d - 1) / d; }

void check_block(const FastfoodBlock& b, std::size_t d) {
    if (b.signs.size() != d || b.perm.size() != d || b.gauss.size() != d || b.scale.size() != d) {
        throw std::invalid_argument("FastfoodBlock: every diagonal must have length " +
                                    std::to_string(d));
    }
    std::vector<bool> seen(d, false);
    for (auto k : b.perm) {
        if (k >= d || seen[k]) throw std::invalid_argument("FastfoodBlock: perm is not a bijection");
        seen[k] = true;
    }
    for (auto s : b.signs) {
        if (s != 1 && s != -1) throw std::invalid_argument("FastfoodBlock: B entries must be +-1");
    }
    for (auto s : b.scale) {
        if (!(s > 0.0f)) throw std::invalid_argument("FastfoodBlock: S entries must be positive");
    }
}

}  // namespace

FastfoodTransform::FastfoodTransform(std::size_t d, std::size_t p, float sigma, std::uint64_t seed,
                                     std::vector<FastfoodBlock> blocks)
    : d_(d), p_(p), sigma_(sigma), seed_(seed), blocks_(std::move(blocks)) {
    if (d < 2 || !is_pow2(d)) {
        throw std::invalid_argument("Fastfood: d must be a power of two >= 2, got " + std::to_string(d));
    }
    if (!(sigma > 0.0f)) throw std::invalid_argument("Fastfood: sigma must be positive");
    if (blocks_.size() != block_count(d, p)) {
        throw std::invalid_argument("Fastfood: expected " + std::to_string(block_count(d, p)) +
                                    " blocks, got " + std::to_string(blocks_.size()));
    }
    for (const auto& b : blocks_) check_block(b, d);
}

std::vector<double> FastfoodTransform::apply(std::span<const double> x) const {
    std::vector<double> out(p_);
    apply_into(x, out);
    return out;
}

void FastfoodTransform::apply_into(std::span<const double> x, std::span<double> out) const {
    if (x.size() != d_) {
        throw std::invalid_argument("Fastfood apply: input has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(d_));
    }
    if (out.size() != p_) throw std::invalid_argument("Fastfood apply: output length mismatch");

    const double norm = 1.0 / (static_cast<double>(sigma_) * std::sqrt(static_cast<double>(d_)));
    std::vector<double> first(d_), second(d_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto& blk = blocks_[k];
        for (std::size_t i = 0; i < d_; ++i) first[i] = blk.signs[i] * x[i];
        fwht_inplace(first);
        for (std::size_t i = 0; i < d_; ++i) second[i] = blk.gauss[i] * first[blk.perm[i]];
        fwht_inplace(second);
        const std::size_t base = k * d_;
        const std::size_t n = std::min(d_, p_ - base);
        for (std::size_t i = 0; i < n; ++i) out[base + i] = norm * blk.scale[i] * second[i];
    }
}

std::uint64_t FastfoodTransform::memory_bits() const {
    const std::uint64_t entries = static_cast<std::uint64_t>(blocks_.size()) * d_;
    return entries * (3 * 32 + 1);
}

FastfoodTransform sample_transform(std::size_t d, std::size_t p, double sigma, std::uint64_t seed) {
    Rng rng(seed);
    return sample_transform(d, p, sigma, seed, rng);
}

FastfoodTransform sample_transform(std::size_t d, std::size_t p, double sigma, std::uint64_t seed,
                                   Rng& rng) {
    if (d < 2 || !is_pow2(d)) {
        throw std::invalid_argument("Fastfood: d must be a power of two >= 2, got " + std::to_string(d));
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("Fastfood: sigma must be positive");

    std::vector<FastfoodBlock> blocks(block_count(d, p));
    for (auto& blk : blocks) {
        blk.signs.resize(d);
        for (auto& s : blk.signs) s = static_cast<std::int8_t>(rng.sign());

        blk.perm.resize(d);
        for (std::size_t i = 0; i < d; ++i) blk.perm[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = d - 1; i > 0; --i) {
            std::swap(blk.perm[i], blk.perm[rng.below(i + 1)]);
        }

        blk.gauss.resize(d);
        double g_norm2 = 0.0;
        for (auto& g : blk.gauss) {
            g = static_cast<float>(rng.normal());
            g_norm2 += static_cast<double>(g) * g;
        }
        // Row i of H·G·Π·H·B has norm √d·‖G‖; rescaling by chi(d)/‖G‖ gives
        // rows the norm distribution of a d-dimensional Gaussian vector.
        const double inv_g = 1.0 / std::sqrt(g_norm2);
        blk.scale.resize(d);
        for (auto& s : blk.scale) {
            float v = static_cast<float>(rng.chi(static_cast<double>(d)) * inv_g);
            s = v > 0.0f ? v : std::numeric_limits<float>::min();
        }
    }
    return FastfoodTransform(d, p, static_cast<float>(sigma), seed, std::move(blocks));
}

GaussianProjection::GaussianProjection(std::size_t d, std::size_t p, double sigma, Rng& rng)
    : d_(d), p_(p), rows_(d * p) {
    if (!(sigma > 0.0)) throw std::invalid_argument("GaussianProjection: sigma must be positive");
    const double inv_sigma = 1.0 / sigma;
    for (auto& v : rows_) v = static_cast<float>(rng.normal() * inv_sigma);
}

std::vector<double> GaussianProjection::apply(std::span<const double> x) const {
    if (x.size() != d_) {
        throw std::invalid_argument("GaussianProjection apply: input has length " +
                                    std::to_string(x.size()) + ", expected " + std::to_string(d_));
    }
    std::vector<double> out(p_);
    for (std::size_t k = 0; k < p_; ++k) {
        const float* row = rows_.data() + k * d_;
        double acc = 0.0;
        for (std::size_t i = 0; i < d_; ++i) acc += row[i] * x[i];
        out[k] = acc;
    }
    return out;
}

}  // namespace bksvm
