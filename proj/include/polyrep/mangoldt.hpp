#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/numeric.hpp"

namespace polyrep {

/// Exact von Mangoldt table for n <= limit, built by a linear
/// smallest-prime-factor sieve. lambda[n] = log p when n = p^t, else 0;
/// every power of the same prime stores the identical double.
/// Storage is 20 bytes per entry: u32 spf + double lambda + double psi prefix.
struct MangoldtTable {
    long long limit = 0;
    std::vector<std::uint32_t> spf; // spf[n] = smallest prime factor, 0 for n < 2
    std::vector<double> lambda;     // Lambda(n), natural log units
    std::vector<double> psi;        // psi[x] = sum_{n<=x} lambda[n]

    bool is_prime_power(long long n) const { return lambda[std::size_t(n)] > 0.0; }

    // Chebyshev psi(x). Exact prefix sum of the table.
    double chebyshev_psi(long long x) const {
        if (x < 1 || x > limit)
            throw precondition_error("chebyshev_psi: x=" + std::to_string(x) + " outside [1, " +
                                     std::to_string(limit) + "]");
        return psi[std::size_t(x)];
    }
};

namespace detail {

// lambda and psi are a pure function of spf; build and cache-load share this
// so a loaded table is bitwise identical to a freshly built one.
inline void derive_from_spf(MangoldtTable& t) {
    const std::size_t n1 = std::size_t(t.limit) + 1;
    t.lambda.assign(n1, 0.0);
    t.psi.assign(n1, 0.0);
    for (long long n = 2; n <= t.limit; ++n) {
        const std::uint32_t p = t.spf[std::size_t(n)];
        if (std::uint32_t(n) == p) {
            t.lambda[std::size_t(n)] = std::log(double(n));
        } else {
            long long m = n;
            while (m % p == 0) m /= p;
            if (m == 1) t.lambda[std::size_t(n)] = t.lambda[p]; // same double as lambda(p)
        }
    }
    for (long long n = 1; n <= t.limit; ++n)
        t.psi[std::size_t(n)] = t.psi[std::size_t(n) - 1] + t.lambda[std::size_t(n)];
}

} // namespace detail

inline MangoldtTable build_mangoldt(long long limit) {
    if (limit < 1) throw precondition_error("build_mangoldt: limit must be >= 1");
    if (limit > 0xFFFFFFFFLL) throw precondition_error("build_mangoldt: limit exceeds u32 sieve range");
    MangoldtTable t;
    t.limit = limit;
    try {
        t.spf.assign(std::size_t(limit) + 1, 0);
        std::vector<std::uint32_t> primes;
        for (long long n = 2; n <= limit; ++n) {
            if (t.spf[std::size_t(n)] == 0) {
                t.spf[std::size_t(n)] = std::uint32_t(n);
                primes.push_back(std::uint32_t(n));
            }
            const std::uint32_t s = t.spf[std::size_t(n)];
            for (std::uint32_t p : primes) {
                if (p > s) break;
                const unsigned long long m = (unsigned long long)n * p;
                if (m > (unsigned long long)limit) break;
                t.spf[std::size_t(m)] = p;
            }
        }
        detail::derive_from_spf(t);
    } catch (const std::bad_alloc&) {
        const long long bytes = (limit + 1) * 20;
        throw std::runtime_error("build_mangoldt: allocation failed, table to " + std::to_string(limit) +
                                 " needs about " + std::to_string(bytes) + " bytes");
    }
    return t;
}

// Cache file layout, little-endian:
//   "PRLB" | u8 version | u64 limit | (limit+1) x u32 spf | u64 FNV-1a(payload)
inline constexpr char cache_magic[4] = {'P', 'R', 'L', 'B'};
inline constexpr std::uint8_t cache_version = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(char(v & 0xFF));
    out.push_back(char((v >> 8) & 0xFF));
    out.push_back(char((v >> 16) & 0xFF));
    out.push_back(char((v >> 24) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

inline std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return v;
}

} // namespace detail

inline void save_cache(const MangoldtTable& t, const std::string& path) {
    std::string payload;
    payload.reserve((std::size_t(t.limit) + 1) * 4);
    for (std::size_t i = 0; i <= std::size_t(t.limit); ++i) detail::put_u32(payload, t.spf[i]);
    const std::uint64_t sum = fnv1a64(payload.data(), payload.size());

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw cache_error(cache_error::kind::io, "save_cache: cannot open " + path);
    std::string head(cache_magic, 4);
    head.push_back(char(cache_version));
    detail::put_u64(head, std::uint64_t(t.limit));
    f.write(head.data(), std::streamsize(head.size()));
    f.write(payload.data(), std::streamsize(payload.size()));
    std::string tail;
    detail::put_u64(tail, sum);
    f.write(tail.data(), std::streamsize(tail.size()));
    if (!f) throw cache_error(cache_error::kind::io, "save_cache: write failed for " + path);
}

inline MangoldtTable load_cache(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw cache_error(cache_error::kind::io, "load_cache: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());

    if (data.size() < 13 || std::memcmp(p, cache_magic, 4) != 0)
        throw cache_error(cache_error::kind::magic, "load_cache: bad magic in " + path);
    if (p[4] != cache_version)
        throw cache_error(cache_error::kind::version,
                          "load_cache: unsupported version " + std::to_string(int(p[4])) + " in " + path);
    const std::uint64_t limit = detail::get_u64(p + 5);
    if (limit > 0xFFFFFFFFULL)
        throw cache_error(cache_error::kind::checksum, "load_cache: implausible limit in " + path);
    const std::size_t payload_len = (std::size_t(limit) + 1) * 4;
    if (data.size() != 13 + payload_len + 8)
        throw cache_error(cache_error::kind::checksum, "load_cache: truncated file " + path);
    const std::uint64_t want = detail::get_u64(p + 13 + payload_len);
    const std::uint64_t got = fnv1a64(p + 13, payload_len);
    if (want != got)
        throw cache_error(cache_error::kind::checksum, "load_cache: checksum mismatch in " + path);

    MangoldtTable t;
    t.limit = (long long)limit;
    t.spf.resize(std::size_t(limit) + 1);
    for (std::size_t i = 0; i <= std::size_t(limit); ++i) t.spf[i] = detail::get_u32(p + 13 + 4 * i);
    detail::derive_from_spf(t);
    return t;
}

} // namespace polyrep
