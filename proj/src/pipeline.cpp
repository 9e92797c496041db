#include "bksvm/pipeline.hpp"

#include "bksvm/rng.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace bksvm {

std::vector<BitVector> embed_rows(const EmbeddingParams& params, const Dataset& data) {
    std::vector<BitVector> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out.push_back(embed(params, data.row(i)));
    return out;
}

namespace {

OneVsAllOptions ova_options(const FitConfig& config) {
    OneVsAllOptions o;
    o.train.lambda = config.lambda;
    o.train.limits = config.limits;
    o.train.loss = config.loss;
    o.init = config.init;
    o.init_subset = config.init_subset;
    o.svm_epochs = config.svm_epochs;
    o.seed = config.seed;
    return o;
}

void check_config(const FitConfig& config, const Dataset& train) {
    if (train.size() == 0) throw std::invalid_argument("training set is empty");
    if (config.p == 0) throw std::invalid_argument("p must be positive");
    if (!(config.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(config.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (train.class_count < 2) throw std::invalid_argument("need at least 2 classes");
}

}  // namespace

TernaryFit fit_ternary(const Dataset& train, const Scaler& scaler, const LabelMap& labels,
                       const FitConfig& config) {
    check_config(config, train);
    EmbeddingParams params = make_embedding(train.d_padded, config.p, config.sigma, config.seed);
    const auto rows = embed_rows(params, train);
    const CodeMatrix codes(rows);
    const OneVsAllOptions options = ova_options(config);

    TernaryFit fit;
    if (train.class_count == 2) {
        const auto y = train.signed_labels(0);
        auto init = make_initial_point(codes, y, options, 0);
        fit.results.push_back(bksvm::train(codes, y, options.train, std::move(init)));
    } else {
        fit.results = train_multiclass(codes, train.labels, train.class_count, options);
    }
    std::vector<TernaryModel> models;
    models.reserve(fit.results.size());
    for (const auto& r : fit.results) models.push_back(r.model);
    fit.bundle = make_bundle(train.d_raw, scaler, labels, std::move(params), models, config.lambda);
    return fit;
}

double accuracy(const ModelBundle& bundle, const Dataset& data) {
    if (data.size() == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (predict_prepared(bundle, data.row(i)) == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

Method parse_method(std::string_view name) {
    if (name == "ternary") return Method::ternary;
    if (name == "fastfood-full") return Method::fastfood_full;
    if (name == "rfe-full") return Method::rfe_full;
    if (name == "bjle") return Method::bjle;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::ternary: return "ternary";
        case Method::fastfood_full: return "fastfood-full";
        case Method::rfe_full: return "rfe-full";
        case Method::bjle: return "bjle";
    }
    return "unknown";
}

namespace {

template <class Featurize>
FeatureMatrix featurize(const Dataset& data, std::size_t p, Featurize&& f) {
    FeatureMatrix m(data.size(), p);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::vector<double> v = f(data.row(i));
        auto out = m.row(i);
        for (std::size_t j = 0; j < p; ++j) out[j] = static_cast<float>(v[j]);
    }
    return m;
}

double linear_accuracy(std::span<const LinearModel> models, const FeatureMatrix& x,
                       std::span<const std::uint32_t> labels) {
    if (x.rows == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (predict_linear(models, x.row(i)) == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(x.rows);
}

std::vector<float> uniform_offsets(Rng& rng, std::size_t p) {
    std::vector<float> b(p);
    for (auto& v : b) v = static_cast<float>(rng.uniform(0.0, 2.0 * std::numbers::pi));
    return b;
}

}  // namespace

BaselineResult fit_baseline(Method method, const Dataset& train, const Dataset& test,
                            const FitConfig& config) {
    check_config(config, train);
    if (test.d_padded != train.d_padded) throw std::invalid_argument("train/test dimension mismatch");

    if (method == Method::ternary) {
        Scaler identity;
        identity.min.assign(train.d_raw, -1.0f);
        identity.max.assign(train.d_raw, 1.0f);
        LabelMap labels;
        for (std::size_t k = 0; k < train.class_count; ++k) labels.classes.push_back(static_cast<int>(k));
        const TernaryFit fit = fit_ternary(train, identity, labels, config);
        return {accuracy(fit.bundle, train), accuracy(fit.bundle, test), cost_report(fit.bundle)};
    }

    const std::size_t d = train.d_padded;
    const std::size_t p = config.p;
    const std::size_t models = train.class_count == 2 ? 1 : train.class_count;
    const std::uint64_t p64 = p;
    const std::uint64_t m64 = models;

    FeatureMatrix xtr;
    FeatureMatrix xte;
    CostReport cost;
    if (method == Method::fastfood_full) {
        const EmbeddingParams params = make_embedding(d, p, config.sigma, config.seed);
        auto f = [&](std::span<const double> x) {
            return rfe_features(params.transform, params.offset, x);
        };
        xtr = featurize(train, p, f);
        xte = featurize(test, p, f);
        cost.transform_bits = params.transform.memory_bits() + 32 * p64;
        cost.embedding_bits = 32 * p64;
        cost.classifier_bits = 32 * m64 * p64;
        cost.flops = transform_flops(params.transform) + 2 * p64 + 2 * m64 * p64;
    } else if (method == Method::rfe_full) {
        Rng rng(config.seed);
        const GaussianProjection proj(d, p, config.sigma, rng);
        const auto offset = uniform_offsets(rng, p);
        auto f = [&](std::span<const double> x) { return rfe_features(proj, offset, x); };
        xtr = featurize(train, p, f);
        xte = featurize(test, p, f);
        cost = rfe_reference_cost(train.d_raw, p, models);
    } else {
        Rng rng(config.seed);
        const GaussianProjection proj(d, p, 1.0, rng);
        auto f = [&](std::span<const double> x) {
            const auto s = embed_sign_projection(proj, x).to_signs();
            return std::vector<double>(s.begin(), s.end());
        };
        xtr = featurize(train, p, f);
        xte = featurize(test, p, f);
        cost.transform_bits = std::uint64_t{32} * train.d_raw * p64;
        cost.embedding_bits = p64;
        cost.classifier_bits = 32 * m64 * p64;
        cost.flops = 2 * train.d_raw * p64 + 2 * m64 * p64;
    }

    LinearSvmOptions svm;
    svm.lambda = config.lambda;
    svm.epochs = config.baseline_epochs;
    svm.seed = config.seed;
    const auto trained = train_linear_one_vs_all(xtr, train.labels, train.class_count, svm);
    return {linear_accuracy(trained, xtr, train.labels), linear_accuracy(trained, xte, test.labels), cost};
}

}  // namespace bksvm
