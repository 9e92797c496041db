#pragma once

#include <cstddef>
#include <span>

namespace bksvm {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Smallest power of two ≥ n, never below 2.
std::size_t next_pow2_min2(std::size_t n);

/// In-place unnormalized Walsh–Hadamard transform, v ← H·v with
/// H_2 = [[1, 1], [1, −1]]. Applying it twice scales by v.size().
///
/// Throws std::invalid_argument unless v.size() is 2^q with q ≥ 1.
void fwht_inplace(std::span<double> v);

}  // namespace bksvm
