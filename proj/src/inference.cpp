#include "bksvm/inference.hpp"

#include "bksvm/fwht.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace bksvm {

PackedTernary pack_ternary(std::span<const std::int8_t> w) {
    PackedTernary out{BitVector(w.size()), BitVector(w.size())};
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] < -1 || w[j] > 1) throw std::invalid_argument("pack_ternary: entry outside {-1,0,1}");
        if (w[j] != 0) out.support.set(j, true);
        if (w[j] > 0) out.sign.set(j, true);
    }
    return out;
}

std::vector<std::int8_t> unpack_ternary(const PackedTernary& packed) {
    std::vector<std::int8_t> w(packed.size(), 0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (packed.support.test(j)) w[j] = packed.sign.test(j) ? 1 : -1;
    }
    return w;
}

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

std::int64_t dot_binary(const BitVector& z, const BitVector& w) {
    check_lengths(z.size(), w.size(), "dot_binary");
    const auto zw = z.words();
    const auto ww = w.words();
    std::int64_t agree = 0;
    for (std::size_t k = 0; k < zw.size(); ++k) {
        std::uint64_t x = ~(zw[k] ^ ww[k]);
        if (k + 1 == zw.size()) x &= z.tail_mask();
        agree += std::popcount(x);
    }
    return 2 * agree - static_cast<std::int64_t>(z.size());
}

std::int64_t dot_masked(const BitVector& z, const PackedTernary& w) {
    check_lengths(z.size(), w.size(), "dot_masked");
    check_lengths(w.sign.size(), w.support.size(), "dot_masked planes");
    const auto zw = z.words();
    const auto sw = w.sign.words();
    const auto mw = w.support.words();
    std::int64_t agree = 0;
    std::int64_t active = 0;
    for (std::size_t k = 0; k < zw.size(); ++k) {
        agree += std::popcount(~(zw[k] ^ sw[k]) & mw[k]);
        active += std::popcount(mw[k]);
    }
    return 2 * agree - active;
}

PrunedBinaryModel prune(std::span<const std::int8_t> w) {
    PrunedBinaryModel m{BitVector(), BitVector(w.size())};
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] == 0) continue;
        m.keep_mask.set(j, true);
        m.weights.push_back(w[j] > 0);
    }
    return m;
}

BitVector compact(const BitVector& z, const BitVector& keep) {
    check_lengths(z.size(), keep.size(), "compact");
    BitVector out;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (keep.test(j)) out.push_back(z.test(j));
    }
    return out;
}

ModelBundle make_bundle(std::size_t d_raw, Scaler scaler, LabelMap labels, EmbeddingParams embedding,
                        std::span<const TernaryModel> models, double lambda) {
    if (scaler.dim() != d_raw) throw std::invalid_argument("make_bundle: scaler dimension != d_raw");
    if (embedding.input_dim() != next_pow2_min2(d_raw)) {
        throw std::invalid_argument("make_bundle: embedding input dimension does not match d_raw");
    }
    if (labels.size() < 2) throw std::invalid_argument("make_bundle: need at least 2 classes");
    const std::size_t expected = labels.size() == 2 ? 1 : labels.size();
    if (models.size() != expected) {
        throw std::invalid_argument("make_bundle: expected " + std::to_string(expected) +
                                    " classifiers, got " + std::to_string(models.size()));
    }
    ModelBundle b;
    b.d_raw = d_raw;
    b.lambda = lambda;
    b.scaler = std::move(scaler);
    b.labels = std::move(labels);
    b.embedding = std::move(embedding);
    for (const auto& m : models) {
        if (m.w.size() != b.embedding_dim()) throw std::invalid_argument("make_bundle: w length != p");
        b.alphas.push_back(static_cast<float>(m.alpha));
    }
    if (b.is_binary()) {
        b.binary = prune(models[0]);
    } else {
        for (const auto& m : models) b.classes.push_back(pack_ternary(m.w));
    }
    return b;
}

std::vector<double> prepare_input(const ModelBundle& bundle, std::span<const double> raw) {
    if (raw.size() != bundle.d_raw) {
        throw std::invalid_argument("sample has " + std::to_string(raw.size()) +
                                    " features, model expects " + std::to_string(bundle.d_raw));
    }
    return pad_to_pow2(apply_scaler(bundle.scaler, raw));
}

namespace {

int binary_sign(const ModelBundle& bundle, std::span<const double> x) {
    const BitVector z = embed_selected(bundle.embedding, x, bundle.binary.keep_mask);
    return dot_binary(z, bundle.binary.weights) >= 0 ? 1 : -1;
}

std::uint32_t multiclass_argmax(const ModelBundle& bundle, std::span<const double> x);

}  // namespace

int predict_binary(const ModelBundle& bundle, std::span<const double> raw) {
    if (!bundle.is_binary()) throw std::logic_error("predict_binary: bundle is multiclass");
    return binary_sign(bundle, prepare_input(bundle, raw));
}

std::vector<double> decision_scores(const ModelBundle& bundle, const BitVector& z) {
    if (bundle.is_binary()) {
        return {static_cast<double>(dot_binary(compact(z, bundle.binary.keep_mask), bundle.binary.weights))};
    }
    std::vector<double> scores(bundle.classes.size());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        scores[k] = static_cast<double>(bundle.alphas[k]) *
                    static_cast<double>(dot_masked(z, bundle.classes[k]));
    }
    return scores;
}

namespace {

std::uint32_t multiclass_argmax(const ModelBundle& bundle, std::span<const double> x) {
    const auto scores = decision_scores(bundle, embed(bundle.embedding, x));
    std::uint32_t best = 0;
    for (std::uint32_t k = 1; k < scores.size(); ++k) {
        if (scores[k] > scores[best]) best = k;
    }
    return best;
}

}  // namespace

std::uint32_t predict_multiclass(const ModelBundle& bundle, std::span<const double> raw) {
    if (bundle.is_binary()) throw std::logic_error("predict_multiclass: bundle is binary");
    return multiclass_argmax(bundle, prepare_input(bundle, raw));
}

std::uint32_t predict_prepared(const ModelBundle& bundle, std::span<const double> x) {
    if (x.size() != bundle.embedding.input_dim()) {
        throw std::invalid_argument("predict_prepared: input has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(bundle.embedding.input_dim()));
    }
    if (bundle.is_binary()) return binary_sign(bundle, x) > 0 ? 0u : 1u;
    return multiclass_argmax(bundle, x);
}

std::uint32_t predict_id(const ModelBundle& bundle, std::span<const double> raw) {
    return predict_prepared(bundle, prepare_input(bundle, raw));
}

std::uint64_t transform_flops(const FastfoodTransform& t) {
    const std::uint64_t d = t.input_dim();
    if (t.blocks().empty()) return 0;
    const std::uint64_t log2d = static_cast<std::uint64_t>(std::countr_zero(d));
    // Two FWHTs (d·log2 d adds each) and the B, G and S·scale diagonals.
    return t.blocks().size() * (2 * d * log2d + 3 * d);
}

CostReport cost_report(const ModelBundle& bundle) {
    const auto& t = bundle.embedding.transform;
    const std::uint64_t p = t.output_dim();
    CostReport c;
    c.transform_bits = t.memory_bits() + 2 * 32 * p;
    if (p == 0) return CostReport{};
    if (bundle.is_binary()) {
        const std::uint64_t active = bundle.binary.active();
        c.embedding_bits = active;
        c.classifier_bits = active;
        c.bops = 2 * BitVector::words_for(active);  // xnor, popcount
        c.flops = transform_flops(t) + 3 * active;  // + b, cos, + t
    } else {
        const std::uint64_t classes = bundle.classes.size();
        c.embedding_bits = p;
        c.classifier_bits = 2 * classes * p;
        c.bops = 3 * BitVector::words_for(p) * classes;  // xnor, and, popcount
        c.flops = transform_flops(t) + 3 * p;
    }
    return c;
}

CostReport rfe_reference_cost(std::size_t d, std::size_t p, std::size_t c) {
    CostReport r;
    r.transform_bits = std::uint64_t{32} * d * p + std::uint64_t{32} * p;
    r.embedding_bits = std::uint64_t{32} * p;
    r.classifier_bits = std::uint64_t{32} * c * p;
    r.flops = std::uint64_t{2} * d * p + 2 * p + 2 * c * p;
    return r;
}

}  // namespace bksvm
