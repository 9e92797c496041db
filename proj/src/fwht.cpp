#include "bksvm/fwht.hpp"

#include <stdexcept>
#include <string>

namespace bksvm {

std::size_t next_pow2_min2(std::size_t n) {
    std::size_t d = 2;
    while (d < n) d <<= 1;
    return d;
}

void fwht_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    if (n < 2 || !is_pow2(n)) {
        throw std::invalid_argument("fwht: length must be a power of two >= 2, got " +
                                    std::to_string(n));
    }
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * half) {
            double* lo = v.data() + base;
            double* hi = lo + half;
            for (std::size_t j = 0; j < half; ++j) {
                const double a = lo[j];
                const double b = hi[j];
                lo[j] = a + b;
                hi[j] = a - b;
            }
        }
    }
}

}  // namespace bksvm
