#include "bksvm/dataio.hpp"

#include "bksvm/fwht.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace bksvm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Splits on ASCII whitespace without allocating.
std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

int parse_label(std::string_view token, std::size_t line_no) {
    double v;
    if (!parse_double(token, v) || v != std::floor(v) ||
        std::abs(v) > std::numeric_limits<int>::max()) {
        throw ParseError(line_no, "bad label '" + std::string(token) + "'");
    }
    return static_cast<int>(v);
}

}  // namespace

SparseData parse_libsvm(std::istream& in) {
    SparseData data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        const auto tokens = tokenize(view);
        if (tokens.empty()) continue;

        SparseSample sample;
        sample.label = parse_label(tokens[0], line_no);
        sample.entries.reserve(tokens.size() - 1);
        std::uint32_t prev = 0;
        for (std::size_t k = 1; k < tokens.size(); ++k) {
            const auto tok = tokens[k];
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
                throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
            }
            std::uint32_t index = 0;
            const auto idx = tok.substr(0, colon);
            auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
            if (ec != std::errc() || ptr != idx.data() + idx.size() || index == 0) {
                throw ParseError(line_no, "bad feature index '" + std::string(idx) + "'");
            }
            if (index <= prev) {
                throw ParseError(line_no, "feature indices must be strictly increasing (" +
                                              std::to_string(index) + " after " +
                                              std::to_string(prev) + ")");
            }
            double value;
            if (!parse_double(tok.substr(colon + 1), value)) {
                throw ParseError(line_no, "bad feature value '" +
                                              std::string(tok.substr(colon + 1)) + "'");
            }
            sample.entries.push_back({index, value});
            prev = index;
        }
        data.dim = std::max<std::size_t>(data.dim, prev);
        data.samples.push_back(std::move(sample));
    }
    return data;
}

SparseData load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_libsvm(in);
}

std::string format_libsvm(const SparseSample& sample) {
    std::string out = std::to_string(sample.label);
    char buf[64];
    for (const auto& e : sample.entries) {
        out += ' ';
        out += std::to_string(e.index);
        out += ':';
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
        out.append(buf, ptr);
    }
    return out;
}

std::vector<double> densify(const SparseSample& sample, std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    for (const auto& e : sample.entries) {
        if (e.index > dim) {
            throw std::out_of_range("feature index " + std::to_string(e.index) +
                                    " exceeds model dimension " + std::to_string(dim));
        }
        out[e.index - 1] = e.value;
    }
    return out;
}

Scaler fit_scaler(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw std::invalid_argument("fit_scaler: no samples");
    const std::size_t d = rows.front().size();
    std::vector<double> lo(rows.front()), hi(rows.front());
    for (const auto& r : rows) {
        if (r.size() != d) throw std::invalid_argument("fit_scaler: ragged rows");
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], r[j]);
            hi[j] = std::max(hi[j], r[j]);
        }
    }
    Scaler s;
    s.min.assign(lo.begin(), lo.end());
    s.max.assign(hi.begin(), hi.end());
    return s;
}

std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> x) {
    if (x.size() != scaler.dim()) {
        throw std::invalid_argument("apply_scaler: sample has " + std::to_string(x.size()) +
                                    " features, scaler expects " + std::to_string(scaler.dim()));
    }
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double lo = scaler.min[j];
        const double hi = scaler.max[j];
        if (!(hi > lo)) {
            out[j] = 0.0;
            continue;
        }
        const double v = 2.0 * (x[j] - lo) / (hi - lo) - 1.0;
        out[j] = std::clamp(v, -1.0, 1.0);
    }
    return out;
}

std::vector<double> pad_to_pow2(std::span<const double> x) {
    std::vector<double> out(next_pow2_min2(x.size()), 0.0);
    std::copy(x.begin(), x.end(), out.begin());
    return out;
}

LabelMap LabelMap::build(std::span<const SparseSample> samples) {
    LabelMap map;
    for (const auto& s : samples) {
        if (std::find(map.classes.begin(), map.classes.end(), s.label) == map.classes.end()) {
            map.classes.push_back(s.label);
        }
    }
    if (map.classes.size() == 2 && std::is_permutation(map.classes.begin(), map.classes.end(),
                                                       std::begin({1, -1}))) {
        map.classes = {1, -1};
    }
    return map;
}

std::size_t LabelMap::id_of(int label) const {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) {
        throw std::out_of_range("label " + std::to_string(label) + " not present in training labels");
    }
    return static_cast<std::size_t>(it - classes.begin());
}

std::vector<std::int8_t> Dataset::signed_labels(std::size_t positive) const {
    std::vector<std::int8_t> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == positive ? 1 : -1;
    return y;
}

Dataset make_dataset(const SparseData& data, std::size_t d_raw, const Scaler& scaler,
                     const LabelMap& labels) {
    if (scaler.dim() != d_raw) throw std::invalid_argument("make_dataset: scaler dimension mismatch");
    Dataset ds;
    ds.d_raw = d_raw;
    ds.d_padded = next_pow2_min2(d_raw);
    ds.class_count = labels.size();
    ds.values.assign(data.samples.size() * ds.d_padded, 0.0);
    ds.labels.reserve(data.samples.size());
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const auto dense = densify(data.samples[i], d_raw);
        const auto scaled = apply_scaler(scaler, dense);
        std::copy(scaled.begin(), scaled.end(), ds.values.begin() + i * ds.d_padded);
        ds.labels.push_back(static_cast<std::uint32_t>(labels.id_of(data.samples[i].label)));
    }
    return ds;
}

Dataset make_training_dataset(const SparseData& data, Scaler& scaler_out, LabelMap& labels_out) {
    if (data.samples.empty()) throw std::invalid_argument("training data is empty");
    std::vector<std::vector<double>> dense;
    dense.reserve(data.samples.size());
    for (const auto& s : data.samples) dense.push_back(densify(s, data.dim));
    scaler_out = fit_scaler(dense);
    labels_out = LabelMap::build(data.samples);
    return make_dataset(data, data.dim, scaler_out, labels_out);
}

}  // namespace bksvm
