#pragma once

#include "bksvm/dataio.hpp"

#include <cstddef>
#include <cstdint>

namespace bksvm {

struct CirclesConfig {
    std::size_t n = 2000;
    double inner_radius = 0.5;
    double outer_radius = 1.0;
    double noise = 0.05;  // std-dev of the radial jitter
    std::uint64_t seed = 1;
};

/// Two concentric annuli in 2-D: label +1 on the inner ring, −1 on the outer.
/// Classes alternate so both have n/2 samples (±1).
SparseData make_circles(const CirclesConfig& config);

}  // namespace bksvm
