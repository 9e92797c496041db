#include "bksvm/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bksvm {

FeatureMatrix FeatureMatrix::from_codes(std::span<const BitVector> codes) {
    if (codes.empty()) return {};
    FeatureMatrix m(codes.size(), codes.front().size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i].size() != m.cols) throw std::invalid_argument("from_codes: ragged codes");
        auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) r[j] = codes[i].test(j) ? 1.0f : -1.0f;
    }
    return m;
}

namespace {

double dot(std::span<const double> w, std::span<const float> x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
    return acc;
}

}  // namespace

double LinearModel::decision(std::span<const float> x) const {
    if (x.size() != w.size()) throw std::invalid_argument("LinearModel: feature length mismatch");
    return dot(w, x) + bias;
}

double linear_objective(const LinearModel& model, const FeatureMatrix& x,
                        std::span<const std::int8_t> y, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        loss += std::max(0.0, 1.0 - y[i] * model.decision(x.row(i)));
    }
    double norm2 = 0.0;
    for (double v : model.w) norm2 += v * v;
    return loss / static_cast<double>(x.rows) + lambda * norm2;
}

LinearModel train_linear(const FeatureMatrix& x, std::span<const std::int8_t> y,
                         const LinearSvmOptions& options) {
    if (x.rows == 0) throw std::invalid_argument("train_linear: empty data");
    if (y.size() != x.rows) throw std::invalid_argument("train_linear: label count mismatch");
    if (!(options.lambda > 0.0)) throw std::invalid_argument("train_linear: lambda must be positive");
    if (options.epochs == 0) throw std::invalid_argument("train_linear: epochs must be positive");

    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    // The objective uses λ‖w‖², i.e. Pegasos with regularizer (λ'/2)‖w‖², λ' = 2λ.
    const double reg = 2.0 * options.lambda;
    const double radius2 = 1.0 / reg;

    // w = scale · v keeps the shrink step O(1).
    std::vector<double> v(p, 0.0), avg(p, 0.0);
    double scale = 1.0;
    double v_norm2 = 0.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(options.seed);

    const std::size_t total = n * options.epochs;
    const std::size_t avg_from = total / 2;
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
        for (std::size_t idx : order) {
            ++t;
            const auto xi = x.row(idx);
            const double vx = dot(v, xi);
            const double margin = y[idx] * scale * vx;
            const double eta = 1.0 / (reg * static_cast<double>(t));

            if (t == 1) {
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
                v_norm2 = 0.0;
            } else {
                scale *= 1.0 - 1.0 / static_cast<double>(t);
            }
            if (margin < 1.0) {
                const double c = eta * y[idx] / scale;
                double x_norm2 = 0.0;
                for (std::size_t j = 0; j < p; ++j) {
                    v[j] += c * xi[j];
                    x_norm2 += static_cast<double>(xi[j]) * xi[j];
                }
                const double vx_now = t == 1 ? 0.0 : vx;
                v_norm2 += 2.0 * c * vx_now + c * c * x_norm2;
            }
            const double w_norm2 = scale * scale * v_norm2;
            if (w_norm2 > radius2) scale *= std::sqrt(radius2 / w_norm2);
            if (scale < 1e-9) {
                for (auto& vj : v) vj *= scale;
                v_norm2 *= scale * scale;
                scale = 1.0;
            }
            if (t > avg_from) {
                for (std::size_t j = 0; j < p; ++j) avg[j] += scale * v[j];
            }
        }
    }
    const double count = static_cast<double>(total - avg_from);
    LinearModel model;
    model.w.resize(p);
    for (std::size_t j = 0; j < p; ++j) model.w[j] = avg[j] / count;
    return model;
}

std::vector<LinearModel> train_linear_one_vs_all(const FeatureMatrix& x,
                                                 std::span<const std::uint32_t> labels,
                                                 std::size_t class_count,
                                                 const LinearSvmOptions& options) {
    if (class_count < 2) throw std::invalid_argument("train_linear_one_vs_all: need >= 2 classes");
    const std::size_t models = class_count == 2 ? 1 : class_count;
    std::vector<LinearModel> out;
    out.reserve(models);
    std::vector<std::int8_t> y(labels.size());
    for (std::size_t k = 0; k < models; ++k) {
        for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == k ? 1 : -1;
        out.push_back(train_linear(x, y, options));
    }
    return out;
}

std::uint32_t predict_linear(std::span<const LinearModel> models, std::span<const float> x) {
    if (models.empty()) throw std::invalid_argument("predict_linear: no models");
    if (models.size() == 1) return models[0].decision(x) >= 0.0 ? 0u : 1u;
    std::uint32_t best = 0;
    double best_score = models[0].decision(x);
    for (std::uint32_t k = 1; k < models.size(); ++k) {
        const double s = models[k].decision(x);
        if (s > best_score) {
            best = k;
            best_score = s;
        }
    }
    return best;
}

namespace {

std::vector<double> cosine_features(std::vector<double> proj, std::span<const float> offset) {
    if (offset.size() != proj.size()) {
        throw std::invalid_argument("rfe_features: offset length " + std::to_string(offset.size()) +
                                    " != p " + std::to_string(proj.size()));
    }
    const double norm = std::sqrt(2.0 / static_cast<double>(proj.size()));
    for (std::size_t j = 0; j < proj.size(); ++j) proj[j] = norm * std::cos(proj[j] + offset[j]);
    return proj;
}

}  // namespace

std::vector<double> rfe_features(const FastfoodTransform& transform, std::span<const float> offset,
                                 std::span<const double> x) {
    return cosine_features(transform.apply(x), offset);
}

std::vector<double> rfe_features(const GaussianProjection& proj, std::span<const float> offset,
                                 std::span<const double> x) {
    return cosine_features(proj.apply(x), offset);
}

}  // namespace bksvm
