#pragma once

#include "bksvm/bit_vector.hpp"
#include "bksvm/dataio.hpp"
#include "bksvm/embedding.hpp"
#include "bksvm/ternary_trainer.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bksvm {

/// Ternary vector as two bit planes: w = sign ⊙ support.
///
/// Canonical form keeps sign bits at 0 wherever support is 0.
struct PackedTernary {
    BitVector sign;     // 1 ↔ +1
    BitVector support;  // 1 ↔ nonzero

    std::size_t size() const { return sign.size(); }
    bool operator==(const PackedTernary&) const = default;
};

PackedTernary pack_ternary(std::span<const std::int8_t> w);
std::vector<std::int8_t> unpack_ternary(const PackedTernary& packed);

/// ±1 dot product as 2·popcount(xnor(z, w)) − len.
std::int64_t dot_binary(const BitVector& z, const BitVector& w);

/// Σ_{j: w_j ≠ 0} w_j z_j as 2·popcount(xnor(z, sign) ∧ support) − popcount(support).
std::int64_t dot_masked(const BitVector& z, const PackedTernary& w);

/// Binary classifier with its zero coefficients removed.
struct PrunedBinaryModel {
    BitVector weights;    // signs of the surviving coefficients, in order
    BitVector keep_mask;  // length p, 1 where w_j ≠ 0

    std::size_t active() const { return weights.size(); }
    std::size_t size() const { return keep_mask.size(); }
};

PrunedBinaryModel prune(std::span<const std::int8_t> w);
inline PrunedBinaryModel prune(const TernaryModel& model) { return prune(model.w); }

/// Gathers the bits of z selected by keep into a dense vector.
BitVector compact(const BitVector& z, const BitVector& keep);

/// Everything needed to classify a raw sample.
struct ModelBundle {
    std::size_t d_raw = 0;
    double lambda = 0.0;
    Scaler scaler;
    LabelMap labels;
    EmbeddingParams embedding;
    std::vector<float> alphas;  // one per stored classifier

    // Binary tasks store a single pruned model; multiclass stores planes.
    PrunedBinaryModel binary;
    std::vector<PackedTernary> classes;

    std::size_t class_count() const { return labels.size(); }
    bool is_binary() const { return labels.size() == 2; }
    std::size_t embedding_dim() const { return embedding.output_dim(); }
};

/// Binary tasks expect one model (positive class = label id 0); multiclass
/// tasks expect one model per class, ordered by class id.
ModelBundle make_bundle(std::size_t d_raw, Scaler scaler, LabelMap labels, EmbeddingParams embedding,
                        std::span<const TernaryModel> models, double lambda);

/// Scaled and padded sample ready for embedding.
std::vector<double> prepare_input(const ModelBundle& bundle, std::span<const double> raw);

/// sign(wᵀz) over the pruned code; sign(0) = +1. Input is raw features.
int predict_binary(const ModelBundle& bundle, std::span<const double> raw);

/// argmax_k α_k·w_kᵀz, lowest class id on ties.
std::uint32_t predict_multiclass(const ModelBundle& bundle, std::span<const double> raw);

/// Class id for either kind of bundle (binary: +1 → 0, −1 → 1).
std::uint32_t predict_id(const ModelBundle& bundle, std::span<const double> raw);

/// predict_id for an input already scaled and padded to the embedding dimension.
std::uint32_t predict_prepared(const ModelBundle& bundle, std::span<const double> x);

/// Per-class decision values from a full-length code: α_k·w_kᵀz for
/// multiclass, the single integer wᵀz for binary.
std::vector<double> decision_scores(const ModelBundle& bundle, const BitVector& z);

/// Inference cost split into the memory and operation counts the model needs
/// for one sample.
struct CostReport {
    std::uint64_t transform_bits = 0;   // S, G, Π at 32 bits, B at 1 bit, b and t at 32 bits
    std::uint64_t embedding_bits = 0;   // one bit per evaluated code coordinate
    std::uint64_t classifier_bits = 0;  // binary: 1 bit per kept coefficient; multiclass: 2·c·p
    std::uint64_t bops = 0;             // 64-bit word operations in the packed dot products
    std::uint64_t flops = 0;            // FWHT adds, diagonal scalings, cos/dither per coordinate

    std::uint64_t total_bits() const { return transform_bits + embedding_bits + classifier_bits; }
    bool operator==(const CostReport&) const = default;
};

CostReport cost_report(const ModelBundle& bundle);

/// Floating-point operations of one Fastfood projection: two FWHTs plus the
/// three diagonal scalings per block.
std::uint64_t transform_flops(const FastfoodTransform& t);

/// Same accounting for a full-precision random Fourier feature model with an
/// explicit d×p matrix: d·p·32 + p·32 (b) transform, p·32 embedding and
/// c·p·32 classifier bits. Used as the memory-reduction baseline.
CostReport rfe_reference_cost(std::size_t d, std::size_t p, std::size_t c);

}  // namespace bksvm
