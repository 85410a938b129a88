#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/numeric.hpp"

namespace polyrep {

using cvec = std::vector<std::complex<double>>;

namespace detail {

// In-place radix-2 transform, length must be a power of two.
// sign = +1: X[m] = sum_r x[r] e(+rm/M); sign = -1 is the unscaled inverse.
inline void fft_pow2(cvec& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) { // bit reversal
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // one exact twiddle table, reused at every stage via stride indexing
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) tw[i] = cis2pi(sign * (double(i) / double(n)));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = tw[k * stride];
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// e(sign * r^2 / (2M)) with the quadratic phase reduced mod 2M in integers,
// so the chirp stays accurate for large r.
inline std::complex<double> chirp(std::uint64_t r, std::uint64_t m, int sign) {
    const std::uint64_t two_m = 2 * m;
    const std::uint64_t rr = r % two_m;
    const std::uint64_t q = (rr * rr) % two_m;
    return cis2pi(sign * (double(q) / double(two_m)));
}

} // namespace detail

/// Discrete Fourier transform of arbitrary length:
/// X[m] = sum_r x[r] e(sign * r m / M). Power-of-two sizes go straight to the
/// radix-2 kernel, everything else through Bluestein's chirp-z reduction.
inline cvec dft_any(const cvec& x, int sign) {
    const std::size_t m = x.size();
    if (m == 0) return {};
    if (m == 1) return x;
    if ((m & (m - 1)) == 0) {
        cvec a = x;
        detail::fft_pow2(a, sign);
        return a;
    }
    const std::size_t l = next_pow2(2 * m - 1);
    cvec a(l, {0.0, 0.0}), b(l, {0.0, 0.0});
    for (std::size_t r = 0; r < m; ++r) a[r] = x[r] * detail::chirp(r, m, sign);
    for (std::size_t r = 0; r < m; ++r) {
        const std::complex<double> c = detail::chirp(r, m, -sign);
        b[r] = c;
        if (r > 0) b[l - r] = c;
    }
    detail::fft_pow2(a, +1);
    detail::fft_pow2(b, +1);
    for (std::size_t i = 0; i < l; ++i) a[i] *= b[i];
    detail::fft_pow2(a, -1);
    cvec out(m);
    for (std::size_t r = 0; r < m; ++r) out[r] = a[r] / double(l) * detail::chirp(r, m, sign);
    return out;
}

/// Linear convolution of two real sequences, truncated to out_len entries.
inline std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t out_len) {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t l = next_pow2(full);
    cvec fa(l, {0.0, 0.0}), fb(l, {0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    detail::fft_pow2(fa, +1);
    detail::fft_pow2(fb, +1);
    for (std::size_t i = 0; i < l; ++i) fa[i] *= fb[i];
    detail::fft_pow2(fa, -1);
    std::vector<double> out(out_len, 0.0);
    const std::size_t n = std::min(out_len, full);
    for (std::size_t i = 0; i < n; ++i) out[i] = fa[i].real() / double(l);
    return out;
}

} // namespace polyrep
