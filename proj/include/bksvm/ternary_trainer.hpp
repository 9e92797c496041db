#pragma once

#include "bksvm/bit_vector.hpp"
#include "bksvm/linear_svm.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace bksvm {

/// Smallest scale the trainer will return; stands in for the open α > 0.
inline constexpr double alpha_min = 1e-8;

/// Binary codes of a training set stored column-major, so that coordinate j
/// of every sample is one contiguous BitVector of length n.
class CodeMatrix {
public:
    CodeMatrix() = default;
    explicit CodeMatrix(std::span<const BitVector> rows);

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return columns_.size(); }
    const BitVector& column(std::size_t j) const { return columns_[j]; }
    int at(std::size_t i, std::size_t j) const { return columns_[j].sign(i); }
    BitVector row(std::size_t i) const;

private:
    std::size_t n_ = 0;
    std::vector<BitVector> columns_;
};

struct TernaryModel {
    std::vector<std::int8_t> w;  // entries in {−1, 0, 1}
    double alpha = 1.0;
    double lambda = 0.0;
    std::uint32_t class_id = 0;

    std::size_t nnz() const;
};

/// Algorithm caches for the current w: h_i = wᵀz_i and r = wᵀw.
struct TrainState {
    std::vector<std::int32_t> h;
    std::int64_t r = 0;
    double objective = 0.0;
};

/// Recomputes h and r from scratch.
TrainState compute_state(std::span<const std::int8_t> w, const CodeMatrix& codes);

struct Candidates {
    double minus = 0.0;  // L(w_j = −1)
    double zero = 0.0;   // L(w_j = 0)
    double plus = 0.0;   // L(w_j = +1)

    double at(int v) const { return v < 0 ? minus : (v == 0 ? zero : plus); }
};

/// A loss paired with the α²·‖w‖² regularizer, with the two exact
/// subproblem solvers the alternating scheme needs.
class Loss {
public:
    virtual ~Loss() = default;
    virtual std::string_view name() const = 0;

    /// (1/n)·Σ ℓ(α·yᵢ·hᵢ) + λ·α²·r, summed in index order.
    virtual double objective(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                             double alpha, std::int64_t r, double lambda) const = 0;

    /// Global minimizer over α ≥ alpha_min with w fixed.
    virtual double solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                               std::int64_t r, double lambda) const = 0;

    /// Objective after setting w_j to each of −1, 0, +1 with all else fixed.
    virtual Candidates candidates(std::size_t j, std::span<const std::int8_t> w,
                                  const TrainState& state, const CodeMatrix& codes,
                                  std::span<const std::int8_t> y, double alpha,
                                  double lambda) const = 0;
    /// True when candidates() at the current value reproduces objective()
    /// bit for bit.
    virtual bool exact_candidates() const { return false; }
};

/// max(0, 1 − m); w_j chosen by evaluating all three values.
class HingeLoss final : public Loss {
public:
    std::string_view name() const override { return "hinge"; }
    bool exact_candidates() const override { return true; }
    double objective(std::span<const std::int32_t> h, std::span<const std::int8_t> y, double alpha,
                     std::int64_t r, double lambda) const override;
    double solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                       std::int64_t r, double lambda) const override;
    Candidates candidates(std::size_t j, std::span<const std::int8_t> w, const TrainState& state,
                          const CodeMatrix& codes, std::span<const std::int8_t> y, double alpha,
                          double lambda) const override;
};

/// (1 − m)²; L(w_j) is a quadratic in w_j whose coefficients come from one
/// O(n) pass, so the three values follow in closed form.
class SquaredLoss final : public Loss {
public:
    std::string_view name() const override { return "squared"; }
    double objective(std::span<const std::int32_t> h, std::span<const std::int8_t> y, double alpha,
                     std::int64_t r, double lambda) const override;
    double solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y,
                       std::int64_t r, double lambda) const override;
    Candidates candidates(std::size_t j, std::span<const std::int8_t> w, const TrainState& state,
                          const CodeMatrix& codes, std::span<const std::int8_t> y, double alpha,
                          double lambda) const override;
};

enum class LossKind { hinge, squared };
std::unique_ptr<Loss> make_loss(LossKind kind);

/// Exact minimizer over α ≥ alpha_min of (1/n)·Σ max(0, 1 − sᵢα) + quad·α².
///
/// Sorts the breakpoints 1/sᵢ (sᵢ > 0) and minimizes the quadratic on each
/// piece; ties go to the smallest α.
double solve_alpha_hinge(std::span<const double> margins, double quad);

/// Hinge solver on the trainer's caches: sᵢ = yᵢhᵢ, quad = λ·r.
double solve_alpha(std::span<const std::int32_t> h, std::span<const std::int8_t> y, std::int64_t r,
                   double lambda);

/// Hinge candidates for coordinate j, each in O(n) from the caches.
Candidates coord_candidates(std::size_t j, std::span<const std::int8_t> w, const TrainState& state,
                            const CodeMatrix& codes, std::span<const std::int8_t> y, double alpha,
                            double lambda);

/// argmin over {−1, 0, +1}; exact ties prefer 0, then the current value.
int pick_coordinate(const Candidates& c, int current);

struct StepEvent {
    enum class Kind { alpha, coordinate } kind;
    std::size_t outer = 0;
    std::size_t coordinate = 0;
    double before = 0.0;
    double after = 0.0;
};
using StepObserver = std::function<void(const StepEvent&)>;

/// One pass j = 0..p−1 updating w, h, r and state.objective in place.
/// A change is kept only if it strictly lowers state.objective; for losses
/// without exact candidates the objective is recomputed to check this.
/// Returns the number of coordinates that changed.
std::size_t sweep_w(std::vector<std::int8_t>& w, TrainState& state, const CodeMatrix& codes,
                    std::span<const std::int8_t> y, double alpha, double lambda, const Loss& loss,
                    const StepObserver& observer = {}, std::size_t outer = 0);

struct TrainLimits {
    std::size_t max_outer = 50;
    std::size_t max_inner = 20;
    double tol = 1e-6;  // relative objective decrease
    /// Rounds of exhaustive sweeps plus an α solve run after the main loop,
    /// until neither w nor α changes.
    std::size_t max_finish = 1000;
};

struct TraceRow {
    std::size_t iteration = 0;
    double alpha = 0.0;
    std::size_t nnz = 0;
    double objective = 0.0;
};

struct InitialPoint {
    std::vector<std::int8_t> w;
    double alpha = 1.0;
};

/// w = sign(w_full) with sign(0) = 0, α = ‖w_full‖₁ / p clamped to alpha_min.
InitialPoint initialize(const LinearModel& full, std::size_t p);

/// Uniform draws from {−1, 0, 1}, α = 1.
InitialPoint random_initial_point(std::size_t p, std::uint64_t seed);

struct TrainResult {
    TernaryModel model;
    TrainState state;
    std::vector<TraceRow> trace;  // row 0 is the initial point
    std::size_t outer_iterations = 0;
};

struct TrainOptions {
    double lambda = 1e-2;
    TrainLimits limits;
    LossKind loss = LossKind::hinge;
    /// Throw std::logic_error if any accepted step raises the objective.
    bool check_monotone = false;
    StepObserver observer;
};

/// Alternates the exact α solve with coordinate sweeps until the relative
/// decrease of an outer round drops below tol or the limits are hit, then
/// polishes until w is coordinate-wise optimal for α and α is optimal for w.
/// The last trace row reflects the polished point. Labels must be ±1.
TrainResult train(const CodeMatrix& codes, std::span<const std::int8_t> y,
                  const TrainOptions& options, InitialPoint init);

enum class InitMode { svm, random };

struct OneVsAllOptions {
    TrainOptions train;
    InitMode init = InitMode::svm;
    std::size_t init_subset = 10000;
    std::size_t svm_epochs = 20;
    std::uint64_t seed = 1;
};

/// Initial point for a ±1 task: the sign-rounded solution of a linear SVM fit
/// on a seeded random subset, or a seeded random ternary vector.
InitialPoint make_initial_point(const CodeMatrix& codes, std::span<const std::int8_t> y,
                                const OneVsAllOptions& options, std::uint32_t class_id);

/// Trains class k against the rest for every k in 0..class_count−1.
std::vector<TrainResult> train_multiclass(const CodeMatrix& codes,
                                          std::span<const std::uint32_t> labels,
                                          std::size_t class_count, const OneVsAllOptions& options);

/// Largest objective decrease obtainable by changing one coordinate of w
/// with α fixed; ≤ 0 means w is coordinate-wise optimal.
double coordinate_gap(const TernaryModel& model, const CodeMatrix& codes,
                      std::span<const std::int8_t> y, const Loss& loss);

}  // namespace bksvm
