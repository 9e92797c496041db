#pragma once

// Slow, direct reference implementations used to check the fast paths.

#include "bksvm/bit_vector.hpp"
#include "bksvm/fastfood.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix hadamard(std::size_t d) {
    Matrix h{{1.0}};
    while (h.size() < d) {
        const std::size_t n = h.size();
        Matrix next(2 * n, std::vector<double>(2 * n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                next[i][j] = h[i][j];
                next[i][j + n] = h[i][j];
                next[i + n][j] = h[i][j];
                next[i + n][j + n] = -h[i][j];
            }
        }
        h = std::move(next);
    }
    return h;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline Matrix diag(const std::vector<double>& v) {
    Matrix m(v.size(), std::vector<double>(v.size(), 0.0));
    for (std::size_t i = 0; i < v.size(); ++i) m[i][i] = v[i];
    return m;
}

/// Dense 1/(σ√d)·S·H·G·Π·H·B for one block, with (Πv)_i = v[perm[i]].
inline Matrix block_matrix(const bksvm::FastfoodBlock& b, double sigma) {
    const std::size_t d = b.signs.size();
    std::vector<double> s(d), g(d), bs(d);
    for (std::size_t i = 0; i < d; ++i) {
        s[i] = b.scale[i] / (sigma * std::sqrt(static_cast<double>(d)));
        g[i] = b.gauss[i];
        bs[i] = b.signs[i];
    }
    Matrix pi(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) pi[i][b.perm[i]] = 1.0;
    const Matrix h = hadamard(d);
    return matmul(diag(s), matmul(h, matmul(diag(g), matmul(pi, matmul(h, diag(bs))))));
}

/// The stacked p×d matrix R̃ᵀ.
inline Matrix transform_matrix(const bksvm::FastfoodTransform& t) {
    Matrix out;
    for (const auto& b : t.blocks()) {
        for (auto& row : block_matrix(b, t.sigma())) {
            if (out.size() == t.output_dim()) break;
            out.push_back(std::move(row));
        }
    }
    return out;
}

inline std::int64_t dot(const std::vector<int>& a, const std::vector<int>& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::vector<int> signs_of(const bksvm::BitVector& v) {
    std::vector<int> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = v.test(i) ? 1 : -1;
    return s;
}

/// (1/n)·Σ max(0, 1 − α·yᵢ·wᵀzᵢ) + λ·α²·‖w‖² evaluated from scratch.
inline double hinge_objective(const std::vector<std::vector<int>>& z, const std::vector<int>& y,
                              const std::vector<int>& w, double alpha, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        loss += std::max(0.0, 1.0 - alpha * y[i] * static_cast<double>(dot(w, z[i])));
    }
    return loss / static_cast<double>(z.size()) + lambda * alpha * alpha * static_cast<double>(dot(w, w));
}

inline double squared_objective(const std::vector<std::vector<int>>& z, const std::vector<int>& y,
                                const std::vector<int>& w, double alpha, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double m = 1.0 - alpha * y[i] * static_cast<double>(dot(w, z[i]));
        loss += m * m;
    }
    return loss / static_cast<double>(z.size()) + lambda * alpha * alpha * static_cast<double>(dot(w, w));
}

/// Minimizer of a unimodal f on [lo, hi] by golden-section search.
inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             int iterations = 200) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iterations; ++k) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

/// Calls f on every vector in {−1, 0, 1}^p.
inline void for_each_ternary(std::size_t p, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> w(p, -1);
    while (true) {
        f(w);
        std::size_t j = 0;
        while (j < p && w[j] == 1) w[j++] = -1;
        if (j == p) return;
        ++w[j];
    }
}

inline bksvm::BitVector random_bits(std::size_t p, std::mt19937_64& gen) {
    bksvm::BitVector v(p);
    for (std::size_t i = 0; i < p; ++i) v.set(i, gen() & 1u);
    return v;
}

}  // namespace oracle
