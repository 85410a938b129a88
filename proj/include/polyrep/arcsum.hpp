#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/fft.hpp"
#include "polyrep/gamma.hpp"
#include "polyrep/mangoldt.hpp"
#include "polyrep/numeric.hpp"
#include "polyrep/poly.hpp"

namespace polyrep {

/// One point on the circle: the frequency alpha together with the complex
/// parameter z = 1/N - 2*pi*i*alpha the major-arc analysis runs through.
struct ArcPoint {
    double alpha = 0.0;
    long long N = 0;
    std::complex<double> z{0.0, 0.0};
};

inline ArcPoint arc_point(long long n, double alpha) {
    if (n < 1) throw precondition_error("arc_point: N must be >= 1");
    return ArcPoint{alpha, n, {1.0 / double(n), -2.0 * M_PI * alpha}};
}

/// Where to cut the damped series, with a certified bound on what the cut
/// discards: sum_{n > radius} log(n) e^{-phi(n)/N} <= tail_bound, which
/// dominates the dropped Lambda-weighted tail.
struct TruncationPlan {
    long long radius = 0;
    double tail_bound = 0.0;
};

/// Smallest R >= N^{1/k} (and past the monotone threshold) with
/// 2 R e^{-phi(R)/(2N)} <= tol propagated through, then an explicit envelope
/// summation certifying the discarded tail.
inline TruncationPlan plan_truncation(const IntPolynomial& phi, long long n, double tol) {
    if (n < 1) throw precondition_error("plan_truncation: N must be >= 1");
    if (!(tol > 0.0)) throw precondition_error("plan_truncation: tol must be > 0");
    const int k = phi.degree();
    const long long start = std::max<long long>(
        {1, phi.monotone_threshold(), (long long)std::ceil(std::pow(double(n), 1.0 / double(k)))});
    auto crit = [&](long long r) {
        return 2.0 * double(r) * std::exp(-double(phi.eval(r)) / (2.0 * double(n)));
    };
    long long radius = start;
    if (crit(radius) > tol) {
        long long lo = start, hi = start;
        while (crit(hi) > tol) {
            lo = hi;
            if (hi > (1LL << 60)) throw tolerance_error("plan_truncation: criterion unreachable");
            hi *= 2;
        }
        while (hi - lo > 1) { // criterion is decreasing where it first dips under tol
            const long long mid = lo + (hi - lo) / 2;
            if (crit(mid) > tol) lo = mid;
            else hi = mid;
        }
        radius = hi;
        for (int back = 0; back < 4096 && radius > start && crit(radius - 1) <= tol; ++back) --radius;
    }

    // Envelope tail: sum log(m) e^{-phi(m)/N} past the radius directly, and
    // close with a geometric remainder once the term ratio is certified. Past
    // certified_growth_point() the increments of phi never shrink, so the
    // ratio at m bounds every later ratio.
    const long long growth = phi.certified_growth_point();
    double tail = 0.0;
    long long m = radius + 1;
    for (long long iters = 0;; ++iters, ++m) {
        const double t = std::log(double(m)) * std::exp(-double(phi.eval(m)) / double(n));
        tail += t;
        if (m >= growth) {
            const double delta = double(phi.eval(m + 1) - phi.eval(m));
            const double ratio =
                std::exp(-delta / double(n)) * (std::log(double(m + 1)) / std::log(double(m)));
            if (ratio < 0.999) {
                const double rem = t * ratio / (1.0 - ratio);
                if (t == 0.0 || rem <= tol * 1e-3 || rem <= tail * 1e-9) {
                    tail += rem;
                    break;
                }
            } else if (t == 0.0) {
                break;
            }
        }
        if (iters > 200000000LL)
            throw tolerance_error("plan_truncation: tail certificate did not converge");
    }
    return TruncationPlan{radius, tail};
}

/// Truncated damped exponential sum
///   sum_{n <= radius} Lambda(n) e^{-damping(n)/N} e(phase(n) * alpha)
/// with the Lambda-support cached once, so repeated alpha evaluations are a
/// single weighted pass. Phases are reduced mod 1 in exact two-product
/// arithmetic; terms whose damping underflows to zero weight are dropped.
class DampedSeries {
public:
    DampedSeries(const IntPolynomial& phase, const IntPolynomial& damping, long long n,
                 const TruncationPlan& plan, const MangoldtTable& table)
        : n_(n), plan_(plan) {
        if (table.limit < plan.radius)
            throw precondition_error("DampedSeries: needs Mangoldt table with limit >= " +
                                     std::to_string(plan.radius) + ", have " +
                                     std::to_string(table.limit));
        for (long long m = 2; m <= plan.radius; ++m) {
            const double lam = table.lambda[std::size_t(m)];
            if (lam <= 0.0) continue;
            const double w = lam * std::exp(-double(damping.eval(m)) / double(n));
            if (w == 0.0) continue;
            freq_.push_back(phase.eval_i64(m));
            weight_.push_back(w);
        }
    }

    std::complex<double> operator()(double alpha) const {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t i = 0; i < freq_.size(); ++i) s += weight_[i] * cis_freq(freq_[i], alpha);
        return s;
    }

    double mass() const { // = value at alpha = 0
        double s = 0.0;
        for (double w : weight_) s += w;
        return s;
    }

    long long max_abs_freq() const {
        long long b = 0;
        for (long long f : freq_) b = std::max(b, f < 0 ? -f : f);
        return b;
    }

    std::size_t terms() const { return freq_.size(); }
    long long big_n() const { return n_; }
    const TruncationPlan& plan() const { return plan_; }
    const std::vector<long long>& freqs() const { return freq_; }
    const std::vector<double>& weights() const { return weight_; }

private:
    long long n_;
    TruncationPlan plan_;
    std::vector<long long> freq_;
    std::vector<double> weight_;
};

/// S~_phi(alpha): phase and damping both phi.
inline std::complex<double> s_tilde_phi(const IntPolynomial& phi, long long n, double alpha,
                                        const TruncationPlan& plan, const MangoldtTable& table) {
    return DampedSeries(phi, phi, n, plan, table)(alpha);
}

/// S~_k(alpha): the pure monomial n^k in both roles.
inline std::complex<double> s_tilde_k(int k, long long n, double alpha, const TruncationPlan& plan,
                                      const MangoldtTable& table) {
    const IntPolynomial m = IntPolynomial::monomial(k);
    return DampedSeries(m, m, n, plan, table)(alpha);
}

/// Mixed sum S~_{k,phi}(alpha): damping by the monomial n^k (k = deg phi),
/// phase by the full phi.
inline std::complex<double> s_tilde_k_phi(const IntPolynomial& phi, long long n, double alpha,
                                          const TruncationPlan& plan, const MangoldtTable& table) {
    return DampedSeries(phi, IntPolynomial::monomial(phi.degree()), n, plan, table)(alpha);
}

/// Major-arc approximant gamma_k (a_k z)^{-1/k} at z = 1/N - 2 pi i alpha.
/// Re(a_k z) > 0, so the principal power is the right branch.
inline std::complex<double> major_approx(int k, long long a_k, long long n, double alpha) {
    if (k < 1 || a_k < 1) throw precondition_error("major_approx: needs k >= 1 and a_k >= 1");
    const std::complex<double> z = arc_point(n, alpha).z;
    return gamma_const(k) * std::pow(double(a_k) * z, std::complex<double>(-1.0 / double(k), 0.0));
}

inline std::complex<double> major_approx(const IntPolynomial& phi, long long n, double alpha) {
    return major_approx(phi.degree(), phi.lead(), n, alpha);
}

/// U(alpha, H) = sum_{m=1}^{H} e(m alpha), evaluated through the closed form
/// U = (sin(pi {H a}) / sin(pi {a})) e((H+1) a / 2) with both fractional parts
/// reduced exactly, which keeps the value stable near alpha = 0 and satisfies
/// |U| <= min(H, 1/(2 ||alpha||)).
inline std::complex<double> u_sum(double alpha, long long h) {
    if (h < 1) throw precondition_error("u_sum: H must be >= 1");
    const double fa = reduce_mod1(alpha);
    if (fa == 0.0) return {double(h), 0.0};
    const double fh = prod_mod1(double(h), alpha);
    const double mag = std::sin(M_PI * fh) / std::sin(M_PI * fa);
    const double ph = M_PI * (fa + fh);
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

/// U at the exact rational alpha = num/den, fractional parts reduced in
/// integer arithmetic. This is what grid summations use so that U vanishes
/// exactly where it should.
inline std::complex<double> u_sum_at(long long num, long long den, long long h) {
    if (h < 1) throw precondition_error("u_sum_at: H must be >= 1");
    if (den < 1) throw precondition_error("u_sum_at: den must be >= 1");
    if (num % den == 0) return {double(h), 0.0};
    const double fa = ratio_mod1(num, den);
    const double fh = prodratio_mod1(h, num, den);
    const double mag = std::sin(M_PI * fh) / std::sin(M_PI * fa);
    const double ph = M_PI * (fa + fh);
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

/// Slow-growth reference factor A(N; C) = exp(C (log N / log log N)^{1/3}).
inline double a_factor(long long n, double c) {
    if (n < 16) throw precondition_error("a_factor: N must be >= 16 so log log N > 0");
    const double l = std::log(double(n));
    return std::exp(c * std::cbrt(l / std::log(l)));
}

/// Predicted window average (gamma_k^j / gamma_{k,j}) a_k^{-j/k} H N^{(j-k)/k}.
inline double main_term(long long n, double h, int j, int k, long long a_k = 1) {
    if (n < 1 || h < 0 || j < 1 || k < 1 || a_k < 1)
        throw precondition_error("main_term: needs N >= 1, H >= 0, j >= 1, k >= 1, a_k >= 1");
    return std::pow(gamma_const(k), double(j)) / gamma_kj(k, j) *
           std::pow(double(a_k), -double(j) / double(k)) * h *
           std::pow(double(n), double(j - k) / double(k));
}

/// All M_g values S~_phi(m / M_g), m = 0..M_g-1, in one transform. Frequencies
/// fold mod M_g (exact at grid points); M_g must strictly exceed the series
/// bandwidth max |phi(n)|.
inline cvec grid_eval(const DampedSeries& series, long long m_g) {
    const long long band = series.max_abs_freq();
    if (m_g <= band)
        throw precondition_error("grid_eval: M_g=" + std::to_string(m_g) +
                                 " must exceed the series bandwidth " + std::to_string(band));
    cvec w(std::size_t(m_g), {0.0, 0.0});
    const auto& fr = series.freqs();
    const auto& wt = series.weights();
    for (std::size_t i = 0; i < fr.size(); ++i) {
        const long long idx = ((fr[i] % m_g) + m_g) % m_g;
        w[std::size_t(idx)] += wt[i];
    }
    return dft_any(w, +1);
}

inline cvec grid_eval(const IntPolynomial& phi, long long n, long long m_g,
                      const TruncationPlan& plan, const MangoldtTable& table) {
    return grid_eval(DampedSeries(phi, phi, n, plan, table), m_g);
}

/// Residual of the telescoping power identity
///   x^j - y^j = (x-y)^2 sum_{l=1}^{j-1} l x^{j-1-l} y^{l-1} + j (x-y) y^{j-1};
/// zero up to rounding for every x, y and j >= 2.
inline double telescope_residual(std::complex<double> x, std::complex<double> y, int j) {
    if (j < 2) throw precondition_error("telescope_residual: j must be >= 2");
    const std::complex<double> lhs = cpow_int(x, j) - cpow_int(y, j);
    std::complex<double> s{0.0, 0.0};
    for (int l = 1; l < j; ++l) s += double(l) * cpow_int(x, j - 1 - l) * cpow_int(y, l - 1);
    const std::complex<double> d = x - y;
    const std::complex<double> rhs = d * d * s + double(j) * d * cpow_int(y, j - 1);
    return std::abs(lhs - rhs);
}

} // namespace polyrep
