#pragma once

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/fft.hpp"
#include "polyrep/mangoldt.hpp"
#include "polyrep/poly.hpp"

namespace polyrep {

/// Weighted representation counts over one window:
/// values[i] = R_{phi,j}(N+1+i) = sum over phi(n_1)+...+phi(n_j) = N+1+i
/// of Lambda(n_1)...Lambda(n_j).
struct RepSeries {
    enum class Method { brute, convolution, fft };
    long long N = 0;
    long long H = 0;
    int j = 1;
    Method method = Method::brute;
    std::vector<double> values; // length H, index n - (N+1)

    double at(long long n) const {
        if (n <= N || n > N + H)
            throw precondition_error("RepSeries::at: n=" + std::to_string(n) + " outside (" +
                                     std::to_string(N) + ", " + std::to_string(N + H) + "]");
        return values[std::size_t(n - N - 1)];
    }
};

enum class ConvMethod { auto_select, direct, fft };

namespace detail {

// Prime powers contributing to sums landing in [lo_target, hi_target]:
// phi values (sorted ascending) with their Lambda weights. `cap` widens the
// upper cut when phi takes negative values, since one large summand can be
// offset by j-1 negative ones.
struct PhiSupport {
    std::vector<long long> value;
    std::vector<double> weight;
    long long vmin = 0, vmax = 0;
    long long cap = 0;
    long long n_need = 0; // sieve limit the enumeration required
};

inline long long global_phi_min(const IntPolynomial& phi) {
    const long long n0 = std::max<long long>(phi.monotone_threshold(), 1);
    long long m = phi.eval_i64(1);
    for (long long n = 2; n <= n0 + 1; ++n) m = std::min(m, phi.eval_i64(n));
    return m;
}

inline long long phi_support_bound(const IntPolynomial& phi, long long cap) {
    const long long n0 = phi.monotone_threshold();
    long long best = 0;
    long long n = 1;
    while (true) {
        const int128 v = phi.eval(n);
        if (v <= int128(cap)) best = n;
        else if (n > n0) break;
        ++n;
    }
    return best;
}

inline PhiSupport phi_support(const IntPolynomial& phi, int j, long long hi_target,
                              const MangoldtTable& table) {
    PhiSupport s;
    const long long gmin = std::min<long long>(0, global_phi_min(phi));
    s.cap = hi_target - (long long)(j - 1) * gmin;
    s.n_need = phi_support_bound(phi, s.cap);
    if (table.limit < s.n_need)
        throw precondition_error("rep counts for this window need a Mangoldt table with limit >= " +
                                 std::to_string(s.n_need) + ", have " + std::to_string(table.limit));
    for (long long n = 2; n <= s.n_need; ++n) {
        if (table.lambda[std::size_t(n)] <= 0.0) continue;
        const long long v = phi.eval_i64(n);
        if (v > s.cap) continue;
        s.value.push_back(v);
        s.weight.push_back(table.lambda[std::size_t(n)]);
    }
    if (!s.value.empty()) {
        std::vector<std::size_t> idx(s.value.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return s.value[a] < s.value[b]; });
        std::vector<long long> v2(idx.size());
        std::vector<double> w2(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            v2[i] = s.value[idx[i]];
            w2[i] = s.weight[idx[i]];
        }
        s.value.swap(v2);
        s.weight.swap(w2);
        s.vmin = s.value.front();
        s.vmax = s.value.back();
    }
    return s;
}

inline void check_window(const IntPolynomial&, int j, long long n, long long h) {
    if (j < 1) throw precondition_error("rep counts need j >= 1");
    if (n < 1 || h < 1) throw precondition_error("rep counts need N >= 1 and H >= 1");
}

// Dense coefficient block covering phi-sums in [lo, lo + v.size() - 1].
struct DenseBlock {
    long long lo = 0;
    std::vector<double> v;
    long long hi() const { return lo + (long long)v.size() - 1; }
    double l1() const {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
};

inline DenseBlock densify(const PhiSupport& s, long long cap) {
    DenseBlock d;
    d.lo = s.vmin;
    d.v.assign(std::size_t(std::min(cap, s.vmax) - s.vmin + 1), 0.0);
    for (std::size_t i = 0; i < s.value.size(); ++i)
        if (s.value[i] <= cap) d.v[std::size_t(s.value[i] - d.lo)] += s.weight[i];
    return d;
}

// One convolution step c * support, truncated above cap. The per-cell
// accumulation order is the support order in both the serial and the
// partitioned variant, so results are identical for any thread count.
inline DenseBlock fold_direct(const DenseBlock& c, const PhiSupport& s, long long cap, int threads) {
    DenseBlock out;
    out.lo = c.lo + s.vmin;
    out.v.assign(std::size_t(cap - out.lo + 1), 0.0);
    auto run = [&](long long alo, long long ahi) { // absolute out-coordinates, inclusive
        for (std::size_t t = 0; t < s.value.size(); ++t) {
            const long long v = s.value[t];
            const double wt = s.weight[t];
            const long long b = std::max(alo, c.lo + v);
            const long long e = std::min(ahi, c.hi() + v);
            for (long long x = b; x <= e; ++x)
                out.v[std::size_t(x - out.lo)] += c.v[std::size_t(x - v - c.lo)] * wt;
        }
    };
    const long long total = (long long)out.v.size();
    if (threads <= 1 || total < 1 << 16) {
        run(out.lo, out.lo + total - 1);
    } else {
        const int tn = std::min<long long>(threads, (total + 65535) / 65536);
        std::vector<std::thread> pool;
        for (int t = 0; t < tn; ++t) {
            const long long b = out.lo + total * t / tn;
            const long long e = out.lo + total * (t + 1) / tn - 1;
            pool.emplace_back(run, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

// FFT gate: conservative forward bound on convolution round-off. When it is
// not comfortably below the data, the caller redoes the fold directly.
inline bool fold_fft(const DenseBlock& c, const DenseBlock& w, long long cap, DenseBlock& out) {
    out.lo = c.lo + w.lo;
    const std::size_t want = std::size_t(cap - out.lo + 1);
    out.v = convolve_fft(c.v, w.v, want);
    const std::size_t l = next_pow2(c.v.size() + w.v.size() - 1);
    const double bound = 16.0 * 1.1e-16 * std::log2(double(l)) * c.l1() * w.l1();
    double peak = 0;
    for (double x : out.v) peak = std::max(peak, std::abs(x));
    if (bound > 1e-9 * std::max(peak, 1.0)) return false;
    for (double& x : out.v)
        if (x < 0.0 && x > -bound) x = 0.0;
    return true;
}

} // namespace detail

/// Largest n any summand can use for windows ending at N+H, i.e. the sieve
/// limit rep_brute / rep_convolve will demand.
inline long long required_sieve_limit(const IntPolynomial& phi, int j, long long n, long long h) {
    if (j < 1) throw precondition_error("required_sieve_limit: j must be >= 1");
    const long long gmin = std::min<long long>(0, detail::global_phi_min(phi));
    return detail::phi_support_bound(phi, n + h - (long long)(j - 1) * gmin);
}

/// Exhaustive j-fold enumeration. Exponential in j; the reference oracle.
inline RepSeries rep_brute(const IntPolynomial& phi, int j, long long n, long long h,
                           const MangoldtTable& table) {
    detail::check_window(phi, j, n, h);
    RepSeries r;
    r.N = n;
    r.H = h;
    r.j = j;
    r.method = RepSeries::Method::brute;
    r.values.assign(std::size_t(h), 0.0);
    const detail::PhiSupport s = detail::phi_support(phi, j, n + h, table);
    if (s.value.empty()) return r;

    struct Rec {
        const detail::PhiSupport& s;
        long long n, h;
        int j;
        std::vector<double>& out;
        void go(int depth, long long partial, double wprod) {
            if (depth == j - 1) {
                const long long lo = n + 1 - partial, hi = n + h - partial;
                auto it = std::lower_bound(s.value.begin(), s.value.end(), lo);
                for (; it != s.value.end() && *it <= hi; ++it) {
                    const std::size_t t = std::size_t(it - s.value.begin());
                    out[std::size_t(partial + *it - n - 1)] += wprod * s.weight[t];
                }
                return;
            }
            const long long rem = j - depth - 1;
            for (std::size_t t = 0; t < s.value.size(); ++t) {
                const long long p2 = partial + s.value[t];
                if (p2 + rem * s.vmin > n + h) break; // values sorted ascending
                if (p2 + rem * s.vmax < n + 1) continue;
                go(depth + 1, p2, wprod * s.weight[t]);
            }
        }
    } rec{s, n, h, j, r.values};
    rec.go(0, 0, 1.0);
    return r;
}

/// Iterated truncated convolution of the Lambda-weighted phi support.
/// Exact like the brute count (weights are nonnegative; collisions of phi
/// values merge additively). `threads` splits the output range of each fold.
inline RepSeries rep_convolve(const IntPolynomial& phi, int j, long long n, long long h,
                              const MangoldtTable& table, ConvMethod mode = ConvMethod::auto_select,
                              int threads = 1) {
    detail::check_window(phi, j, n, h);
    RepSeries r;
    r.N = n;
    r.H = h;
    r.j = j;
    r.method = RepSeries::Method::convolution;
    r.values.assign(std::size_t(h), 0.0);
    const detail::PhiSupport s = detail::phi_support(phi, j, n + h, table);
    if (s.value.empty()) return r;

    const long long cap = s.cap;
    detail::DenseBlock w = detail::densify(s, cap);
    detail::DenseBlock c = w;
    bool used_fft = false;
    for (int fold = 2; fold <= j; ++fold) {
        const bool want_fft =
            mode == ConvMethod::fft ||
            (mode == ConvMethod::auto_select && c.v.size() + w.v.size() > (std::size_t(1) << 22));
        detail::DenseBlock next;
        bool ok = false;
        if (want_fft) {
            ok = detail::fold_fft(c, w, cap, next);
            used_fft = used_fft || ok;
        }
        if (!ok) next = detail::fold_direct(c, s, cap, threads);
        c = std::move(next);
    }
    if (used_fft) r.method = RepSeries::Method::fft;
    for (long long m = n + 1; m <= n + h; ++m)
        if (m >= c.lo && m <= c.hi()) r.values[std::size_t(m - n - 1)] = c.v[std::size_t(m - c.lo)];
    return r;
}

/// Plain window sum, fixed left-to-right order.
inline double interval_sum(const RepSeries& r) {
    double s = 0;
    for (double x : r.values) s += x;
    return s;
}

/// Window sum with the exponential damping e^{-n/N} the series analysis uses.
inline double weighted_interval_sum(const RepSeries& r) {
    double s = 0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        s += r.values[i] * std::exp(-double(r.N + 1 + (long long)i) / double(r.N));
    return s;
}

inline void to_csv(const RepSeries& r, std::ostream& os) {
    os << "n,R\n";
    char buf[64];
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n", r.N + 1 + (long long)i, r.values[i]);
        os << buf;
    }
}

} // namespace polyrep
