#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyrep {

using int128 = __int128;

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int128 addition overflow");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int128 multiplication overflow");
    return r;
}

inline long long checked_narrow(int128 v, const char* context) {
    if (v > int128(INT64_MAX) || v < int128(INT64_MIN))
        throw std::overflow_error(std::string(context) + ": value exceeds 64-bit range");
    return static_cast<long long>(v);
}

inline std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

// x reduced to [-1/2, 1/2].
inline double reduce_mod1(double x) {
    return x - std::nearbyint(x);
}

// a*b mod 1 without losing the fractional part when a*b is large.
// Dekker two-product: p + e == a*b exactly, then each half is reduced.
inline double prod_mod1(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return reduce_mod1(reduce_mod1(p) + e);
}

// e(r) = exp(2*pi*i*r) for r already reduced to [-1/2, 1/2].
inline std::complex<double> cis2pi(double r) {
    const double t = 2.0 * M_PI * r;
    return {std::cos(t), std::sin(t)};
}

// e(f*alpha) with integer frequency f (|f| < 2^53 so f is exact as a double).
inline std::complex<double> cis_freq(long long f, double alpha) {
    return cis2pi(prod_mod1(static_cast<double>(f), alpha));
}

// num/den mod 1 as the exactly reduced centered fraction r/den, |r| <= den/2.
inline double ratio_mod1(long long num, long long den) {
    long long r = num % den;
    if (2 * r > den) r -= den;
    else if (2 * r < -den) r += den;
    return double(r) / double(den);
}

// (a*b/den) mod 1, the product reduced in integer arithmetic first.
inline double prodratio_mod1(long long a, long long b, long long den) {
    const long long p = (long long)((int128(a % den) * (b % den)) % den);
    return ratio_mod1(p, den);
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// z^j for small integer j by repeated multiplication.
inline std::complex<double> cpow_int(std::complex<double> z, int j) {
    std::complex<double> r{1.0, 0.0};
    while (j > 0) {
        if (j & 1) r *= z;
        z *= z;
        j >>= 1;
    }
    return r;
}

} // namespace polyrep
