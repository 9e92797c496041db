#include "bksvm/bit_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace bksvm {

BitVector::BitVector(std::size_t len) : words_(words_for(len), 0), len_(len) {}

BitVector::BitVector(std::size_t len, std::vector<std::uint64_t> words)
    : words_(std::move(words)), len_(len) {
    if (words_.size() != words_for(len)) {
        throw std::invalid_argument("BitVector: expected " + std::to_string(words_for(len)) +
                                    " words for " + std::to_string(len) + " bits, got " +
                                    std::to_string(words_.size()));
    }
    if (!words_.empty() && (words_.back() & ~tail_mask()) != 0) {
        throw std::invalid_argument("BitVector: nonzero bits past the end");
    }
}

BitVector BitVector::from_signs(std::span<const std::int8_t> signs) {
    BitVector out(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] >= 0) out.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return out;
}

void BitVector::set(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= bit;
    } else {
        words_[i >> 6] &= ~bit;
    }
}

void BitVector::push_back(bool value) {
    if ((len_ & 63) == 0) words_.push_back(0);
    ++len_;
    set(len_ - 1, value);
}

std::size_t BitVector::popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::int8_t> BitVector::to_signs() const {
    std::vector<std::int8_t> out(len_);
    for (std::size_t i = 0; i < len_; ++i) out[i] = test(i) ? 1 : -1;
    return out;
}

std::uint64_t BitVector::tail_mask() const {
    const std::size_t rem = len_ & 63;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

BitVector BitVector::operator~() const {
    BitVector out(*this);
    for (auto& w : out.words_) w = ~w;
    if (!out.words_.empty()) out.words_.back() &= tail_mask();
    return out;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    const auto wa = a.words();
    const auto wb = b.words();
    std::size_t n = 0;
    for (std::size_t k = 0; k < wa.size(); ++k) {
        n += static_cast<std::size_t>(std::popcount(wa[k] ^ wb[k]));
    }
    return n;
}

std::int64_t signed_dot(const BitVector& a, const BitVector& b) {
    return static_cast<std::int64_t>(a.size()) - 2 * static_cast<std::int64_t>(hamming(a, b));
}

}  // namespace bksvm
