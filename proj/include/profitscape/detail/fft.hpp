#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace profitscape::detail {

// Iterative radix-2 Cooley-Tukey, in place. Size must be a power of two.
// Forward transform: X_k = sum_j x_j exp(-2*pi*i*j*k/n); inverse applies the
// conjugate kernel and divides by n.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace profitscape::detail
