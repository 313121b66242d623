#pragma once

#include <complex>
#include <vector>

#include "ellint/errors.hpp"

namespace ellint::detail {

/// In-place radix-2 FFT, length a power of two.
/// sign = -1: F[k] = sum_x f[x] e^{-2 pi i k x / N}; sign = +1 the conjugate
/// transform (no 1/N normalization).
inline void fft(std::complex<double>* a, int n, int sign) {
    if (n & (n - 1)) throw Error("fft length must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * 3.141592653589793238462643 / len;
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// 2D transform of a row-major n x n array.
inline void fft2d(std::vector<std::complex<double>>& a, int n, int sign) {
    std::vector<std::complex<double>> col(n);
    for (int r = 0; r < n; ++r) fft(a.data() + static_cast<size_t>(r) * n, n, sign);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[r] = a[static_cast<size_t>(r) * n + c];
        fft(col.data(), n, sign);
        for (int r = 0; r < n; ++r) a[static_cast<size_t>(r) * n + c] = col[r];
    }
}

} // namespace ellint::detail
