#include "bksvm/ternary_trainer.hpp"

#include "bksvm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bksvm {

CodeMatrix::CodeMatrix(std::span<const BitVector> rows) : n_(rows.size()) {
    const std::size_t p = rows.empty() ? 0 : rows.front().size();
    columns_.assign(p, BitVector(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        if (rows[i].size() != p) throw std::invalid_argument("CodeMatrix: ragged codes");
        for (std::size_t j = 0; j < p; ++j) {
            if (rows[i].test(j)) columns_[j].set(i, true);
        }
    }
}

BitVector CodeMatrix::row(std::size_t i) const {
    BitVector out(cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        if (columns_[j].test(i)) out.set(j, true);
    }
    return out;
}

std::size_t TernaryModel::nnz() const {
    return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](auto v) { return v != 0; }));
}

TrainState compute_state(std::span<const std::int8_t> w, const CodeMatrix& codes) {
    if (w.size() != codes.cols()) throw std::invalid_argument("compute_state: w length != p");
    TrainState s;
    s.h.assign(codes.rows(), 0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] == 0) continue;
        s.r += 1;
        const auto& col = codes.column(j);
        for (std::size_t i = 0; i < codes.rows(); ++i) s.h[i] += col.test(i) ? w[j] : -w[j];
    }
    return s;
}

namespace {

// Both the objective and every candidate go through these two helpers with
// integer margins, so the candidate for the current w_j reproduces the
// objective bit for bit.
inline double hinge_term(double alpha, std::int64_t margin) {
    return std::max(0.0, 1.0 - alpha * static_cast<double>(margin));
}

inline double finish(double loss_sum, std::size_t n, double alpha, double lambda, std::int64_t r) {
    return loss_sum / static_cast<double>(n) + lambda * alpha * alpha * static_cast<double>(r);
}

// Calls fn(i, z_ij) for every sample, z_ij ∈ {−1, +1}.
template <typename Fn>
inline void for_each_bit(const BitVector& col, std::size_t n, Fn&& fn) {
    const auto words = col.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
        const std::uint64_t bits = words[k];
        const std::size_t base = k * 64;
        const std::size_t m = std::min<std::size_t>(64, n - base);
        for (std::size_t b = 0; b < m; ++b) fn(base + b, ((bits >> b) & 1u) ? 1 : -1);
    }
}

void check_labels(std::span<const std::int8_t> y, std::size_t n) {
    if (n == 0) throw std::invalid_argument("train: no samples");
    if (y.size() != n) throw std::invalid_argument("train: label count != sample count");
    for (auto v : y) {
        if (v != 1 && v != -1) throw std::invalid_argument("train: labels must be +1 or -1");
    }
}

}  // namespace

// ---- hinge ---------------------------------------------------------------

double HingeLoss::objective(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                            double alpha, std::int64_t r, double lambda) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sum += hinge_term(alpha, static_cast<std::int64_t>(y[i]) * h[i]);
    }
    return finish(sum, h.size(), alpha, lambda, r);
}

double solve_alpha_hinge(std::span<const double> margins, double quad) {
    const double n = static_cast<double>(margins.size());
    if (margins.empty()) return alpha_min;

    // Terms with margin ≤ 0 stay active for every α ≥ 0.
    double active_count = 0.0;
    double active_sum = 0.0;
    std::vector<double> positive;
    for (double s : margins) {
        if (s > 0.0) {
            if (1.0 / s > alpha_min) positive.push_back(s);
        } else {
            active_count += 1.0;
            active_sum += s;
        }
    }
    // Breakpoints 1/s ascending = margins descending.
    std::sort(positive.begin(), positive.end(), std::greater<>());
    for (double s : positive) {
        active_count += 1.0;
        active_sum += s;
    }

    auto value = [&](double a) { return (active_count - active_sum * a) / n + quad * a * a; };

    double best_alpha = alpha_min;
    double best_value = std::numeric_limits<double>::infinity();
    double lo = alpha_min;
    for (std::size_t k = 0; k <= positive.size(); ++k) {
        const double hi = k < positive.size() ? 1.0 / positive[k]
                                              : std::numeric_limits<double>::infinity();
        double a;
        if (quad > 0.0) {
            a = std::clamp(active_sum / (2.0 * n * quad), lo, hi);
        } else {
            a = active_sum > 0.0 ? hi : lo;
        }
        if (std::isfinite(a)) {
            const double v = value(a);
            if (v < best_value) {
                best_value = v;
                best_alpha = a;
            }
        }
        if (k < positive.size()) {
            active_count -= 1.0;
            active_sum -= positive[k];
            lo = hi;
        }
    }
    return std::max(best_alpha, alpha_min);
}

double solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y, std::int64_t r,
                   double lambda) {
    std::vector<double> margins(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) margins[i] = static_cast<double>(y[i]) * h[i];
    return solve_alpha_hinge(margins, lambda * static_cast<double>(r));
}

double HingeLoss::solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                              std::int64_t r, double lambda) const {
    return bksvm::solve_alpha(h, y, r, lambda);
}

Candidates coord_candidates(std::size_t j, std::span<const std::int8_t> w, const TrainState& state,
                            const CodeMatrix& codes, std::span<const std::int8_t> y, double alpha,
                            double lambda) {
    const std::size_t n = codes.rows();
    const int wj = w[j];
    double sm = 0.0, sz = 0.0, sp = 0.0;
    for_each_bit(codes.column(j), n, [&](std::size_t i, int z) {
        const std::int64_t q = y[i] * z;
        const std::int64_t base = static_cast<std::int64_t>(y[i]) * state.h[i] - wj * q;
        sm += hinge_term(alpha, base - q);
        sz += hinge_term(alpha, base);
        sp += hinge_term(alpha, base + q);
    });
    const std::int64_t r_rest = state.r - wj * wj;
    return {finish(sm, n, alpha, lambda, r_rest + 1), finish(sz, n, alpha, lambda, r_rest),
            finish(sp, n, alpha, lambda, r_rest + 1)};
}

Candidates HingeLoss::candidates(std::size_t j, std::span<const std::int8_t> w,
                                 const TrainState& state, const CodeMatrix& codes,
                                 std::span<const std::int8_t> y, double alpha, double lambda) const {
    return coord_candidates(j, w, state, codes, y, alpha, lambda);
}

// ---- squared -------------------------------------------------------------

double SquaredLoss::objective(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                              double alpha, std::int64_t r, double lambda) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double u = 1.0 - alpha * static_cast<double>(static_cast<std::int64_t>(y[i]) * h[i]);
        sum += u * u;
    }
    return finish(sum, h.size(), alpha, lambda, r);
}

double SquaredLoss::solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                                std::int64_t r, double lambda) const {
    const double n = static_cast<double>(h.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double s = static_cast<double>(y[i]) * h[i];
        s1 += s;
        s2 += s * s;
    }
    const double denom = s2 / n + lambda * static_cast<double>(r);
    if (!(denom > 0.0)) return alpha_min;
    return std::max(alpha_min, (s1 / n) / denom);
}

Candidates SquaredLoss::candidates(std::size_t j, std::span<const std::int8_t> w,
                                   const TrainState& state, const CodeMatrix& codes,
                                   std::span<const std::int8_t> y, double alpha,
                                   double lambda) const {
    // With w_j = 0 residuals are uᵢ = 1 − α·yᵢ·(hᵢ − w_j z_ij); setting w_j = v
    // subtracts v·α·qᵢ (qᵢ = yᵢ z_ij) from each, so
    // L(v) = L(0) + α²(1 + λ)·v² − (2α/n)·Σ uᵢqᵢ · v.
    const std::size_t n = codes.rows();
    const int wj = w[j];
    double sum_u2 = 0.0, sum_uq = 0.0;
    for_each_bit(codes.column(j), n, [&](std::size_t i, int z) {
        const std::int64_t q = y[i] * z;
        const std::int64_t base = static_cast<std::int64_t>(y[i]) * state.h[i] - wj * q;
        const double u = 1.0 - alpha * static_cast<double>(base);
        sum_u2 += u * u;
        sum_uq += u * static_cast<double>(q);
    });
    const std::int64_t r_rest = state.r - wj * wj;
    const double l0 = finish(sum_u2, n, alpha, lambda, r_rest);
    const double a = alpha * alpha * (1.0 + lambda);
    const double b = -2.0 * alpha * sum_uq / static_cast<double>(n);
    return {l0 + a - b, l0, l0 + a + b};
}

std::unique_ptr<Loss> make_loss(LossKind kind) {
    switch (kind) {
        case LossKind::hinge: return std::make_unique<HingeLoss>();
        case LossKind::squared: return std::make_unique<SquaredLoss>();
    }
    throw std::invalid_argument("make_loss: unknown loss");
}

// ---- coordinate descent --------------------------------------------------

int pick_coordinate(const Candidates& c, int current) {
    // Lexicographic on (value, preference): 0 first, then current, then other.
    auto rank = [current](int v) { return v == 0 ? 0 : (v == current ? 1 : 2); };
    int best = current;
    for (int v : {-1, 0, 1}) {
        const double lv = c.at(v);
        const double lb = c.at(best);
        if (lv < lb || (lv == lb && rank(v) < rank(best))) best = v;
    }
    return best;
}

std::size_t sweep_w(std::vector<std::int8_t>& w, TrainState& state, const CodeMatrix& codes,
                    std::span<const std::int8_t> y, double alpha, double lambda, const Loss& loss,
                    const StepObserver& observer, std::size_t outer) {
    const std::size_t n = codes.rows();
    std::size_t changes = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const Candidates c = loss.candidates(j, w, state, codes, y, alpha, lambda);
        const int old = w[j];
        const int v = pick_coordinate(c, old);
        if (v == old) continue;
        const int delta = v - old;
        const auto shift = [&](int by) {
            for_each_bit(codes.column(j), n, [&](std::size_t i, int z) { state.h[i] += by * z; });
        };
        shift(delta);
        state.r += v * v - old * old;
        const double after = loss.exact_candidates() ? c.at(v) : loss.objective(state.h, y, alpha, state.r, lambda);
        if (!(after < state.objective)) {
            // Closed-form candidates can disagree in the last bits.
            shift(-delta);
            state.r -= v * v - old * old;
            continue;
        }
        w[j] = static_cast<std::int8_t>(v);
        const double before = state.objective;
        state.objective = after;
        ++changes;
        if (observer) observer({StepEvent::Kind::coordinate, outer, j, before, state.objective});
    }
    return changes;
}

InitialPoint initialize(const LinearModel& full, std::size_t p) {
    if (full.w.size() != p) {
        throw std::invalid_argument("initialize: w_full has length " + std::to_string(full.w.size()) +
                                    ", expected " + std::to_string(p));
    }
    InitialPoint init;
    init.w.resize(p);
    double l1 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const double v = full.w[j];
        init.w[j] = static_cast<std::int8_t>(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
        l1 += std::abs(v);
    }
    init.alpha = p == 0 ? alpha_min : std::max(alpha_min, l1 / static_cast<double>(p));
    return init;
}

InitialPoint random_initial_point(std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    InitialPoint init;
    init.w.resize(p);
    for (auto& v : init.w) v = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
    init.alpha = 1.0;
    return init;
}

TrainResult train(const CodeMatrix& codes, std::span<const std::int8_t> y,
                  const TrainOptions& options, InitialPoint init) {
    check_labels(y, codes.rows());
    if (!(options.lambda > 0.0)) throw std::invalid_argument("train: lambda must be positive");
    if (init.w.size() != codes.cols()) throw std::invalid_argument("train: initial w length != p");
    for (auto v : init.w) {
        if (v < -1 || v > 1) throw std::invalid_argument("train: initial w must be ternary");
    }

    const auto loss = make_loss(options.loss);
    const double lambda = options.lambda;
    const double tol = options.limits.tol;

    std::vector<std::int8_t> w = std::move(init.w);
    double alpha = std::max(init.alpha, alpha_min);
    TrainState state = compute_state(w, codes);
    state.objective = loss->objective(state.h, y, alpha, state.r, lambda);

    // Optional audit of every accepted step against a from-scratch objective.
    double audit_last = state.objective;
    auto audit = [&](const StepEvent& e) {
        if (options.check_monotone) {
            const auto fresh = compute_state(w, codes);
            if (fresh.h != state.h || fresh.r != state.r) {
                throw std::logic_error("train: cached h/r diverged from w");
            }
            const double value = loss->objective(fresh.h, y, alpha, fresh.r, lambda);
            if (value != state.objective || value > audit_last) {
                throw std::logic_error("train: audited objective " + std::to_string(value) + ", tracked " +
                                       std::to_string(state.objective) + ", previous " +
                                       std::to_string(audit_last));
            }
            audit_last = value;
        }
        if (options.observer) options.observer(e);
    };
    const StepObserver sweep_observer =
        (options.check_monotone || options.observer) ? StepObserver(audit) : StepObserver();

    TrainResult result;
    result.trace.push_back({0, alpha, static_cast<std::size_t>(state.r), state.objective});

    for (std::size_t outer = 1; outer <= options.limits.max_outer; ++outer) {
        const double outer_start = state.objective;

        const double alpha_new = loss->solve_alpha(state.h, y, state.r, lambda);
        const double obj_new = loss->objective(state.h, y, alpha_new, state.r, lambda);
        if (obj_new <= state.objective) {
            const double before = state.objective;
            alpha = alpha_new;
            state.objective = obj_new;
            if (sweep_observer) sweep_observer({StepEvent::Kind::alpha, outer, 0, before, obj_new});
        }

        for (std::size_t inner = 0; inner < options.limits.max_inner; ++inner) {
            const double before = state.objective;
            const std::size_t changed =
                sweep_w(w, state, codes, y, alpha, lambda, *loss, sweep_observer, outer);
            if (changed == 0 || before - state.objective <= tol * std::abs(before)) break;
        }

        result.trace.push_back({outer, alpha, static_cast<std::size_t>(state.r), state.objective});
        result.outer_iterations = outer;
        if (outer_start - state.objective <= tol * std::abs(outer_start)) break;
    }

    // The tolerance can stop a round before w is exactly coordinate-wise
    // optimal. Finish at a point neither block can improve: every accepted
    // step strictly lowers the objective over finitely many (w, α) states.
    const std::size_t last_outer = result.outer_iterations;
    const std::size_t finish_rounds = last_outer == 0 ? 0 : options.limits.max_finish;
    for (std::size_t round = 0; round < finish_rounds; ++round) {
        bool moved = false;
        while (sweep_w(w, state, codes, y, alpha, lambda, *loss, sweep_observer, last_outer) > 0) {
            moved = true;
        }
        const double alpha_new = loss->solve_alpha(state.h, y, state.r, lambda);
        const double obj_new = loss->objective(state.h, y, alpha_new, state.r, lambda);
        if (obj_new < state.objective) {
            const double before = state.objective;
            alpha = alpha_new;
            state.objective = obj_new;
            moved = true;
            if (sweep_observer) sweep_observer({StepEvent::Kind::alpha, last_outer, 0, before, obj_new});
        }
        if (!moved) break;
    }
    auto& last = result.trace.back();
    last.alpha = alpha;
    last.nnz = static_cast<std::size_t>(state.r);
    last.objective = state.objective;

    result.model.w = std::move(w);
    result.model.alpha = alpha;
    result.model.lambda = lambda;
    result.state = std::move(state);
    return result;
}

InitialPoint make_initial_point(const CodeMatrix& codes, std::span<const std::int8_t> y,
                                const OneVsAllOptions& options, std::uint32_t class_id) {
    const std::size_t p = codes.cols();
    const std::uint64_t seed = options.seed + 0x9E3779B97F4A7C15ull * (class_id + 1);
    if (options.init == InitMode::random) return random_initial_point(p, seed);

    const std::size_t n = codes.rows();
    const std::size_t m = std::min(n, std::max<std::size_t>(options.init_subset, 1));
    // Same subset for every class: drawn from the base seed.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(options.seed);
    for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());

    FeatureMatrix x(m, p);
    std::vector<std::int8_t> ys(m);
    for (std::size_t k = 0; k < m; ++k) {
        auto row = x.row(k);
        for (std::size_t j = 0; j < p; ++j) row[j] = static_cast<float>(codes.at(idx[k], j));
        ys[k] = y[idx[k]];
    }
    LinearSvmOptions svm;
    svm.lambda = options.train.lambda;
    svm.epochs = options.svm_epochs;
    svm.seed = seed;
    return initialize(train_linear(x, ys, svm), p);
}

std::vector<TrainResult> train_multiclass(const CodeMatrix& codes,
                                          std::span<const std::uint32_t> labels,
                                          std::size_t class_count, const OneVsAllOptions& options) {
    if (class_count < 2) throw std::invalid_argument("train_multiclass: need at least 2 classes");
    if (labels.size() != codes.rows()) throw std::invalid_argument("train_multiclass: label count mismatch");
    std::vector<TrainResult> out;
    out.reserve(class_count);
    std::vector<std::int8_t> y(labels.size());
    for (std::uint32_t k = 0; k < class_count; ++k) {
        for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == k ? 1 : -1;
        auto init = make_initial_point(codes, y, options, k);
        auto res = train(codes, y, options.train, std::move(init));
        res.model.class_id = k;
        out.push_back(std::move(res));
    }
    return out;
}

double coordinate_gap(const TernaryModel& model, const CodeMatrix& codes,
                      std::span<const std::int8_t> y, const Loss& loss) {
    TrainState state = compute_state(model.w, codes);
    double gap = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < model.w.size(); ++j) {
        const Candidates c = loss.candidates(j, model.w, state, codes, y, model.alpha, model.lambda);
        const double best = std::min({c.minus, c.zero, c.plus});
        gap = std::max(gap, c.at(model.w[j]) - best);
    }
    return model.w.empty() ? 0.0 : gap;
}

}  // namespace bksvm
