#pragma once

#include "bksvm/inference.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bksvm {

// Model file layout, version 1. All integers and floats little-endian; bit
// planes are 64-bit words in BitVector order (LSB-first).
//
//   header     "BKSV", u32 version, u32 d_raw, u32 d_padded, u32 p,
//              u32 class_count, f32 sigma, f32 lambda, u64 seed, u32 blocks
//   labels     i32[class_count]            raw label of each class id
//   scaler     f32 min[d_raw], f32 max[d_raw]
//   blocks     per block: f32 S[d], f32 G[d], u32 perm[d], u64 B[⌈d/64⌉]
//   offsets    f32 b[p], f32 t[p]
//   alphas     f32[m], m = 1 for binary tasks, class_count otherwise
//   classifier binary:     u64 keep_mask[⌈p/64⌉], u32 active, u64 signs[⌈active/64⌉]
//              multiclass: per class u64 sign[⌈p/64⌉], u64 support[⌈p/64⌉]

inline constexpr std::uint32_t model_format_version = 1;
inline constexpr std::size_t model_header_bytes = 44;

/// Unreadable model file; offset() is the byte position of the failure.
class ModelFormatError : public std::runtime_error {
public:
    ModelFormatError(std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Byte counts of each section of the serialized form.
struct ModelFileLayout {
    std::size_t header = 0;
    std::size_t labels = 0;
    std::size_t scaler = 0;
    std::size_t transform = 0;   // S, G, Π and B of every block
    std::size_t offsets = 0;     // b and t
    std::size_t alphas = 0;
    std::size_t classifier = 0;

    std::size_t total() const {
        return header + labels + scaler + transform + offsets + alphas + classifier;
    }
};

ModelFileLayout model_file_layout(const ModelBundle& bundle);

std::vector<std::uint8_t> serialize(const ModelBundle& bundle);
ModelBundle deserialize(std::span<const std::uint8_t> bytes);

/// Writes atomically via a temporary file; returns bytes written.
std::size_t save(const ModelBundle& bundle, const std::string& path);
ModelBundle load(const std::string& path);

}  // namespace bksvm
