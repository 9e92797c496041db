#pragma once

#include "bksvm/bit_vector.hpp"
#include "bksvm/fastfood.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bksvm {

/// Dithered-cosine binary code z = sign(cos(R̃ᵀx + b) + t).
struct EmbeddingParams {
    FastfoodTransform transform;
    std::vector<float> offset;  // b, uniform on [0, 2π]
    std::vector<float> dither;  // t, uniform on [−1, 1]

    std::size_t input_dim() const { return transform.input_dim(); }
    std::size_t output_dim() const { return transform.output_dim(); }
};

/// Samples the transform, then b, then t, all from one Rng(seed) stream.
EmbeddingParams make_embedding(std::size_t d, std::size_t p, double sigma, std::uint64_t seed);

/// Bit j is 1 iff cos((R̃ᵀx)_j + b_j) + t_j ≥ 0.
BitVector embed(const EmbeddingParams& params, std::span<const double> x);

/// The bits of embed(params, x) at positions set in `keep`, packed in
/// order. Cosines are only evaluated for kept coordinates.
BitVector embed_selected(const EmbeddingParams& params, std::span<const double> x,
                         const BitVector& keep);

/// Gaussian kernel exp(−‖x − y‖² / (2σ²)).
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma);

/// Lower band of the normalized Hamming distance: 4/π²·(1 − u).
double band_lower(double u);
/// Upper band: min{½√(1 − u), 4/π²·(1 − ⅔u)}.
double band_upper(double u);

/// Smallest p for which the band bound holds with probability ≥ 1 − ε over n points.
std::size_t band_min_dim(std::size_t n, double delta, double epsilon);

/// True when lower(k) − δ ≤ d_H/p ≤ upper(k) + δ.
bool within_band(double kernel, double normalized_hamming, double delta);

/// Fraction of pairs i < j of `points` whose codes fall outside the band.
/// Kernel values use the transform's σ.
double band_check(std::span<const std::vector<double>> points, const EmbeddingParams& params,
                  double delta);

/// Binary JL code sign(Rx) with the ≥ 0 → 1 convention.
BitVector embed_sign_projection(const GaussianProjection& proj, std::span<const double> x);

}  // namespace bksvm
