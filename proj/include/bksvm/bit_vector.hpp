#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bksvm {

/// Packed vector of ±1 values. Bit 1 encodes +1 and bit 0 encodes −1.
///
/// Bits are stored LSB-first inside 64-bit words: element j lives in word
/// j / 64 at bit position j % 64. Bits past size() in the last word are
/// always zero. This layout is part of the model file format.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len);
    BitVector(std::size_t len, std::vector<std::uint64_t> words);

    /// Packs a ±1 vector; any value ≥ 0 maps to bit 1.
    static BitVector from_signs(std::span<const std::int8_t> signs);

    std::size_t size() const { return len_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    int sign(std::size_t i) const { return test(i) ? 1 : -1; }
    void set(std::size_t i, bool value);
    /// Appends one bit at position size().
    void push_back(bool value);

    std::size_t popcount() const;
    std::vector<std::int8_t> to_signs() const;

    /// Elementwise negation of the ±1 vector.
    BitVector operator~() const;

    bool operator==(const BitVector& other) const = default;

    static std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }
    /// Mask selecting the valid bits of the last word.
    std::uint64_t tail_mask() const;

private:
    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

/// Number of positions where a and b differ. Throws on length mismatch.
std::size_t hamming(const BitVector& a, const BitVector& b);

/// ±1 inner product; equals len − 2·hamming.
std::int64_t signed_dot(const BitVector& a, const BitVector& b);

}  // namespace bksvm
