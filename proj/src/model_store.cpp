#include "bksvm/model_store.hpp"

#include "bksvm/fwht.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace bksvm {

ModelFormatError::ModelFormatError(std::size_t offset, const std::string& what)
    : std::runtime_error("model file offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace {

constexpr char magic[4] = {'B', 'K', 'S', 'V'};

class Writer {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    void u32(std::uint32_t v) {
        for (int k = 0; k < 4; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void u64(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f32s(std::span<const float> v) {
        for (float x : v) f32(x);
    }
    void words(std::span<const std::uint64_t> w) {
        for (auto x : w) u64(x);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : in_(bytes) {}

    std::size_t offset() const { return pos_; }
    bool done() const { return pos_ == in_.size(); }

    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) {
            throw ModelFormatError(pos_, "truncated: need " + std::to_string(n) + " bytes, " +
                                             std::to_string(in_.size() - pos_) + " left");
        }
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= std::uint32_t{in_[pos_ + k]} << (8 * k);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t{in_[pos_ + k]} << (8 * k);
        pos_ += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
    std::vector<float> f32s(std::size_t n) {
        need(4 * n);
        std::vector<float> v(n);
        for (auto& x : v) x = f32();
        return v;
    }
    BitVector bits(std::size_t len) {
        const std::size_t start = pos_;
        need(8 * BitVector::words_for(len));
        std::vector<std::uint64_t> w(BitVector::words_for(len));
        for (auto& x : w) x = u64();
        try {
            return BitVector(len, std::move(w));
        } catch (const std::invalid_argument& e) {
            throw ModelFormatError(start, e.what());
        }
    }
    void expect_magic() {
        need(4);
        if (std::memcmp(in_.data() + pos_, magic, 4) != 0) throw ModelFormatError(pos_, "bad magic");
        pos_ += 4;
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

std::uint32_t narrow(std::size_t v, const char* what) {
    if (v > 0xFFFFFFFFu) throw std::invalid_argument(std::string(what) + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

ModelFileLayout model_file_layout(const ModelBundle& b) {
    const auto& t = b.embedding.transform;
    const std::size_t d = t.input_dim();
    const std::size_t p = t.output_dim();
    const std::size_t pw = BitVector::words_for(p);
    ModelFileLayout l;
    l.header = model_header_bytes;
    l.labels = 4 * b.labels.size();
    l.scaler = 2 * 4 * b.d_raw;
    l.transform = t.blocks().size() * (3 * 4 * d + 8 * BitVector::words_for(d));
    l.offsets = 2 * 4 * p;
    l.alphas = 4 * b.alphas.size();
    if (b.is_binary()) {
        l.classifier = 8 * pw + 4 + 8 * BitVector::words_for(b.binary.active());
    } else {
        l.classifier = b.classes.size() * 2 * 8 * pw;
    }
    return l;
}

std::vector<std::uint8_t> serialize(const ModelBundle& b) {
    const auto& t = b.embedding.transform;
    const std::size_t d = t.input_dim();
    const std::size_t p = t.output_dim();

    Writer w;
    w.bytes(magic, 4);
    w.u32(model_format_version);
    w.u32(narrow(b.d_raw, "d_raw"));
    w.u32(narrow(d, "d_padded"));
    w.u32(narrow(p, "p"));
    w.u32(narrow(b.labels.size(), "class_count"));
    w.f32(t.sigma());
    w.f32(static_cast<float>(b.lambda));
    w.u64(t.seed());
    w.u32(narrow(t.blocks().size(), "block count"));

    for (int label : b.labels.classes) w.i32(label);
    w.f32s(b.scaler.min);
    w.f32s(b.scaler.max);

    for (const auto& blk : t.blocks()) {
        w.f32s(blk.scale);
        w.f32s(blk.gauss);
        for (auto k : blk.perm) w.u32(k);
        w.words(BitVector::from_signs(blk.signs).words());
    }
    w.f32s(b.embedding.offset);
    w.f32s(b.embedding.dither);
    w.f32s(b.alphas);

    if (b.is_binary()) {
        w.words(b.binary.keep_mask.words());
        w.u32(narrow(b.binary.active(), "active"));
        w.words(b.binary.weights.words());
    } else {
        for (const auto& c : b.classes) {
            w.words(c.sign.words());
            w.words(c.support.words());
        }
    }
    return w.take();
}

ModelBundle deserialize(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    r.expect_magic();
    const std::size_t version_at = r.offset();
    const std::uint32_t version = r.u32();
    if (version != model_format_version) {
        throw ModelFormatError(version_at, "unsupported model version " + std::to_string(version) +
                                               " (expected " +
                                               std::to_string(model_format_version) + ")");
    }
    const std::size_t header_at = r.offset();
    const std::size_t d_raw = r.u32();
    const std::size_t d = r.u32();
    const std::size_t p = r.u32();
    const std::size_t classes = r.u32();
    const float sigma = r.f32();
    const float lambda = r.f32();
    const std::uint64_t seed = r.u64();
    const std::size_t blocks = r.u32();
    if (d != next_pow2_min2(d_raw)) throw ModelFormatError(header_at, "d_padded inconsistent with d_raw");
    if (classes < 2) throw ModelFormatError(header_at, "class_count must be >= 2");
    if (blocks != (p + d - 1) / d) throw ModelFormatError(header_at, "block count inconsistent with p");

    ModelBundle b;
    b.d_raw = d_raw;
    b.lambda = lambda;
    r.need(4 * classes);
    b.labels.classes.resize(classes);
    for (auto& c : b.labels.classes) c = r.i32();

    b.scaler.min = r.f32s(d_raw);
    b.scaler.max = r.f32s(d_raw);

    const std::size_t blocks_at = r.offset();
    r.need(blocks * (3 * 4 * d + 8 * BitVector::words_for(d)));
    std::vector<FastfoodBlock> blks(blocks);
    for (auto& blk : blks) {
        blk.scale = r.f32s(d);
        blk.gauss = r.f32s(d);
        r.need(4 * d);
        blk.perm.resize(d);
        for (auto& k : blk.perm) k = r.u32();
        const auto bits = r.bits(d);
        blk.signs.resize(d);
        for (std::size_t i = 0; i < d; ++i) blk.signs[i] = static_cast<std::int8_t>(bits.sign(i));
    }
    try {
        b.embedding.transform = FastfoodTransform(d, p, sigma, seed, std::move(blks));
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(blocks_at, e.what());
    }
    b.embedding.offset = r.f32s(p);
    b.embedding.dither = r.f32s(p);

    const std::size_t stored = classes == 2 ? 1 : classes;
    b.alphas = r.f32s(stored);

    if (classes == 2) {
        b.binary.keep_mask = r.bits(p);
        const std::size_t active_at = r.offset();
        const std::size_t active = r.u32();
        if (active != b.binary.keep_mask.popcount()) {
            throw ModelFormatError(active_at, "active count does not match keep mask");
        }
        b.binary.weights = r.bits(active);
    } else {
        b.classes.resize(classes);
        for (auto& c : b.classes) {
            c.sign = r.bits(p);
            const std::size_t support_at = r.offset();
            c.support = r.bits(p);
            const auto sw = c.sign.words();
            const auto mw = c.support.words();
            for (std::size_t k = 0; k < sw.size(); ++k) {
                if (sw[k] & ~mw[k]) throw ModelFormatError(support_at, "sign bit set outside support");
            }
        }
    }
    if (!r.done()) throw ModelFormatError(r.offset(), "trailing bytes after classifier");
    return b;
}

std::size_t save(const ModelBundle& bundle, const std::string& path) {
    const auto bytes = serialize(bundle);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
    return bytes.size();
}

ModelBundle load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model '" + path + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace bksvm
