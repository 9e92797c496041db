#pragma once

#include "bksvm/dataio.hpp"
#include "bksvm/embedding.hpp"
#include "bksvm/inference.hpp"
#include "bksvm/linear_svm.hpp"
#include "bksvm/ternary_trainer.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bksvm {

/// Everything a training run needs besides the data.
struct FitConfig {
    std::size_t p = 2048;
    double sigma = 1.0;
    double lambda = 1e-2;
    std::uint64_t seed = 1;
    InitMode init = InitMode::svm;
    std::size_t init_subset = 10000;
    std::size_t svm_epochs = 20;       // linear SVM used for initialization
    std::size_t baseline_epochs = 30;  // full-precision baselines
    TrainLimits limits;
    LossKind loss = LossKind::hinge;
};

std::vector<BitVector> embed_rows(const EmbeddingParams& params, const Dataset& data);

struct TernaryFit {
    ModelBundle bundle;
    std::vector<TrainResult> results;  // one per stored classifier
};

/// Embeds `train` with a fresh Fastfood embedding drawn from config.seed and
/// trains the ternary classifier(s). Binary tasks train one model with label
/// id 0 as the positive class.
TernaryFit fit_ternary(const Dataset& train, const Scaler& scaler, const LabelMap& labels,
                       const FitConfig& config);

/// Fraction of samples whose predicted class id matches the label.
double accuracy(const ModelBundle& bundle, const Dataset& data);

enum class Method { ternary, fastfood_full, rfe_full, bjle };
Method parse_method(std::string_view name);
std::string_view method_name(Method m);

struct BaselineResult {
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    CostReport cost;
};

/// Trains a full-precision linear SVM on the method's features (Fastfood or
/// explicit-matrix random Fourier features, or sign(Rx) codes) and scores it.
/// Methods share the embedding seed with fit_ternary for the same config.
BaselineResult fit_baseline(Method method, const Dataset& train, const Dataset& test,
                            const FitConfig& config);

}  // namespace bksvm
