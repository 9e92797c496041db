#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bksvm {

/// Malformed LIBSVM input. line() is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct SparseEntry {
    std::uint32_t index;  // 1-based, as in the file
    double value;
};

struct SparseSample {
    int label = 0;
    std::vector<SparseEntry> entries;
};

struct SparseData {
    std::vector<SparseSample> samples;
    std::size_t dim = 0;  // largest index seen
};

/// Reads `<label> <idx>:<val> ...` lines. Blank lines and `#` comments are
/// skipped; indices must be 1-based and strictly increasing.
SparseData parse_libsvm(std::istream& in);
SparseData load_libsvm(const std::string& path);

/// One LIBSVM line without trailing newline; values printed round-trip exact.
std::string format_libsvm(const SparseSample& sample);

/// Dense copy of the first `dim` features. Indices beyond `dim` throw.
std::vector<double> densify(const SparseSample& sample, std::size_t dim);

/// Per-feature min/max for mapping features onto [−1, 1].
struct Scaler {
    std::vector<float> min;
    std::vector<float> max;

    std::size_t dim() const { return min.size(); }
};

/// rows are dense samples of equal length. Throws on empty input.
Scaler fit_scaler(std::span<const std::vector<double>> rows);

/// 2(x − min)/(max − min) − 1, clamped to [−1, 1]; constant features map to 0.
std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> x);

/// Zero-pads to the smallest power of two ≥ max(len, 2).
std::vector<double> pad_to_pow2(std::span<const double> x);

/// Maps raw labels onto contiguous ids 0..c−1 in first-seen order.
///
/// A binary task whose labels are exactly {−1, +1} is reordered so that id 0
/// is +1; for binary tasks id 0 is the positive class.
struct LabelMap {
    std::vector<int> classes;

    static LabelMap build(std::span<const SparseSample> samples);
    std::size_t size() const { return classes.size(); }
    /// Throws std::out_of_range for labels not seen at build time.
    std::size_t id_of(int label) const;
    int label_of(std::size_t id) const { return classes.at(id); }
};

/// Normalized, zero-padded dense samples with contiguous label ids.
struct Dataset {
    std::size_t d_raw = 0;
    std::size_t d_padded = 0;
    std::size_t class_count = 0;
    std::vector<double> values;       // row-major, n × d_padded
    std::vector<std::uint32_t> labels;  // ids into LabelMap

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * d_padded, d_padded};
    }
    /// Labels as ±1 for a one-vs-rest split: +1 iff id == positive.
    std::vector<std::int8_t> signed_labels(std::size_t positive) const;
};

/// Densifies with `d_raw` features, applies the scaler and pads. Labels not
/// in `labels` throw std::out_of_range.
Dataset make_dataset(const SparseData& data, std::size_t d_raw, const Scaler& scaler,
                     const LabelMap& labels);

/// Fits the scaler on `data` and builds the dataset in one step.
Dataset make_training_dataset(const SparseData& data, Scaler& scaler_out, LabelMap& labels_out);

}  // namespace bksvm
