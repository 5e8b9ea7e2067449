#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/errors.hpp"

namespace opuc {

// In-place radix-2 FFT for power-of-two lengths. Twiddles come from a polar
// table rather than running products, keeping roundoff at O(log n * eps);
// the moment pipeline relies on that accuracy.
inline void fft_inplace(std::vector<cplx>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if ((n & (n - 1)) != 0) throw Error("fft: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<cplx> twiddle(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, sign * two_pi * static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = twiddle[k * stride];
                const cplx even = a[base + k];
                const cplx odd = a[base + k + len / 2] * w;
                a[base + k] = even + odd;
                a[base + k + len / 2] = even - odd;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// Forward DFT of real samples, scaled by 1/n: entry k is the k-th Fourier
// coefficient (1/n) * sum_j v[j] e^{-2 pi i j k / n}.
inline std::vector<cplx> fourier_coefficients(const std::vector<double>& v) {
    std::vector<cplx> a(v.begin(), v.end());
    fft_inplace(a);
    const double inv = 1.0 / static_cast<double>(v.size());
    for (auto& x : a) x *= inv;
    return a;
}

}  // namespace opuc
