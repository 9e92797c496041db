#include "bksvm/synthetic.hpp"

#include "bksvm/rng.hpp"

#include <cmath>
#include <numbers>

namespace bksvm {

SparseData make_circles(const CirclesConfig& config) {
    Rng rng(config.seed);
    SparseData data;
    data.dim = 2;
    data.samples.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        const bool inner = (i % 2) == 0;
        const double radius = (inner ? config.inner_radius : config.outer_radius) +
                              config.noise * rng.normal();
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        SparseSample s;
        s.label = inner ? 1 : -1;
        s.entries = {{1, radius * std::cos(angle)}, {2, radius * std::sin(angle)}};
        data.samples.push_back(std::move(s));
    }
    return data;
}

}  // namespace bksvm
