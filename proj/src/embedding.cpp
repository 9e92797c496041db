#include "bksvm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bksvm {

EmbeddingParams make_embedding(std::size_t d, std::size_t p, double sigma, std::uint64_t seed) {
    Rng rng(seed);
    EmbeddingParams params;
    params.transform = sample_transform(d, p, sigma, seed, rng);
    params.offset.resize(p);
    for (auto& b : params.offset) {
        b = static_cast<float>(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    params.dither.resize(p);
    for (auto& t : params.dither) t = static_cast<float>(rng.uniform(-1.0, 1.0));
    return params;
}

namespace {

bool code_bit(double projected, float offset, float dither) {
    return std::cos(projected + offset) + dither >= 0.0;
}

void check_params(const EmbeddingParams& params) {
    const std::size_t p = params.output_dim();
    if (params.offset.size() != p || params.dither.size() != p) {
        throw std::invalid_argument("EmbeddingParams: b and t must have length p");
    }
}

}  // namespace

BitVector embed(const EmbeddingParams& params, std::span<const double> x) {
    check_params(params);
    const auto proj = params.transform.apply(x);
    BitVector z(proj.size());
    for (std::size_t j = 0; j < proj.size(); ++j) {
        if (code_bit(proj[j], params.offset[j], params.dither[j])) z.set(j, true);
    }
    return z;
}

BitVector embed_selected(const EmbeddingParams& params, std::span<const double> x,
                         const BitVector& keep) {
    check_params(params);
    if (keep.size() != params.output_dim()) {
        throw std::invalid_argument("embed_selected: mask length " + std::to_string(keep.size()) +
                                    " != p " + std::to_string(params.output_dim()));
    }
    const auto proj = params.transform.apply(x);
    BitVector z;
    for (std::size_t j = 0; j < proj.size(); ++j) {
        if (keep.test(j)) z.push_back(code_bit(proj[j], params.offset[j], params.dither[j]));
    }
    return z;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
    if (x.size() != y.size()) throw std::invalid_argument("gaussian_kernel: length mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        d2 += diff * diff;
    }
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

namespace {
void check_unit(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("band function argument must lie in [0, 1], got " + std::to_string(u));
    }
}
constexpr double four_over_pi2 = 4.0 / (std::numbers::pi * std::numbers::pi);
}  // namespace

double band_lower(double u) {
    check_unit(u);
    return four_over_pi2 * (1.0 - u);
}

double band_upper(double u) {
    check_unit(u);
    return std::min(0.5 * std::sqrt(1.0 - u), four_over_pi2 * (1.0 - 2.0 * u / 3.0));
}

std::size_t band_min_dim(std::size_t n, double delta, double epsilon) {
    const double nn = static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(std::log(nn * nn / epsilon) / (2.0 * delta * delta)));
}

bool within_band(double kernel, double normalized_hamming, double delta) {
    const double u = std::clamp(kernel, 0.0, 1.0);
    return band_lower(u) - delta <= normalized_hamming && normalized_hamming <= band_upper(u) + delta;
}

double band_check(std::span<const std::vector<double>> points, const EmbeddingParams& params,
                  double delta) {
    if (points.size() < 2) return 0.0;
    std::vector<BitVector> codes;
    codes.reserve(points.size());
    for (const auto& x : points) codes.push_back(embed(params, x));

    const double sigma = params.transform.sigma();
    const double p = static_cast<double>(params.output_dim());
    std::size_t pairs = 0, violations = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double k = gaussian_kernel(points[i], points[j], sigma);
            const double dh = static_cast<double>(hamming(codes[i], codes[j])) / p;
            ++pairs;
            if (!within_band(k, dh, delta)) ++violations;
        }
    }
    return static_cast<double>(violations) / static_cast<double>(pairs);
}

BitVector embed_sign_projection(const GaussianProjection& proj, std::span<const double> x) {
    const auto v = proj.apply(x);
    BitVector z(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] >= 0.0) z.set(j, true);
    }
    return z;
}

}  // namespace bksvm
