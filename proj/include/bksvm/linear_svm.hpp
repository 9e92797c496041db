#pragma once

#include "bksvm/bit_vector.hpp"
#include "bksvm/embedding.hpp"
#include "bksvm/fastfood.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bksvm {

/// Dense row-major n × p feature matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n, std::size_t p) : rows(n), cols(p), data(n * p, 0.0f) {}

    std::span<const float> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    /// ±1 codes as real features.
    static FeatureMatrix from_codes(std::span<const BitVector> codes);
};

/// Full-precision linear classifier without intercept.
struct LinearModel {
    std::vector<double> w;
    double bias = 0.0;  // always 0; kept for the decision-function shape

    double decision(std::span<const float> x) const;
};

struct LinearSvmOptions {
    double lambda = 1e-2;
    std::size_t epochs = 30;
    std::uint64_t seed = 1;
};

/// (1/n)·Σ max(0, 1 − yᵢ·wᵀxᵢ) + λ‖w‖².
double linear_objective(const LinearModel& model, const FeatureMatrix& x,
                        std::span<const std::int8_t> y, double lambda);

/// Pegasos-style stochastic subgradient descent on the objective above.
///
/// Each epoch visits the samples in a fresh seeded shuffle. The returned
/// model is the average of the iterates over the second half of all steps.
LinearModel train_linear(const FeatureMatrix& x, std::span<const std::int8_t> y,
                         const LinearSvmOptions& options);

/// One model per class, class k trained as +1 against the rest.
std::vector<LinearModel> train_linear_one_vs_all(const FeatureMatrix& x,
                                                 std::span<const std::uint32_t> labels,
                                                 std::size_t class_count,
                                                 const LinearSvmOptions& options);

/// Binary: sign of the single model (≥ 0 → id 0). Multiclass: argmax,
/// lowest id on ties.
std::uint32_t predict_linear(std::span<const LinearModel> models, std::span<const float> x);

/// Random Fourier features √(2/p)·cos(R̃ᵀx + b).
std::vector<double> rfe_features(const FastfoodTransform& transform, std::span<const float> offset,
                                 std::span<const double> x);
std::vector<double> rfe_features(const GaussianProjection& proj, std::span<const float> offset,
                                 std::span<const double> x);

}  // namespace bksvm
