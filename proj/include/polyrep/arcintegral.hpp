#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "polyrep/arcsum.hpp"
#include "polyrep/errors.hpp"
#include "polyrep/gamma.hpp"
#include "polyrep/mangoldt.hpp"
#include "polyrep/numeric.hpp"
#include "polyrep/poly.hpp"
#include "polyrep/quadrature.hpp"

namespace polyrep {

namespace detail {

// (a_k z)^{-mu} at z = 1/N - 2 pi i alpha; Re(a_k z) > 0 keeps the principal
// branch on the right sheet.
inline std::complex<double> scaled_z_pow(long long a_k, long long n, double alpha, double mu) {
    const std::complex<double> z{1.0 / double(n), -2.0 * M_PI * alpha};
    return std::pow(double(a_k) * z, std::complex<double>(-mu, 0.0));
}

inline QuadratureSpec with_frequency(QuadratureSpec spec, double fmax) {
    spec.max_frequency = std::max(spec.max_frequency, fmax);
    return spec;
}

} // namespace detail

struct KernelResult {
    std::complex<double> value{};    // integral of z^{-mu} e(-n alpha) over [-X, X]
    double main = 0.0;               // e^{-n/N} n^{mu-1} / Gamma(mu)
    double error_estimate = 0.0;
};

/// The smoothing-kernel integral int_{-X}^{X} z^{-mu} e(-n alpha) d alpha and
/// the closed form it converges to as X grows. The caller declares the e(-n .)
/// oscillation in spec.max_frequency; forgetting it is a precondition error.
inline KernelResult kernel_integral(long long big_n, double mu, long long n, double x,
                                    const QuadratureSpec& spec) {
    if (big_n < 1 || n < 1) throw precondition_error("kernel_integral: needs N >= 1 and n >= 1");
    if (!(mu > 0.0)) throw precondition_error("kernel_integral: mu must be > 0");
    if (!(x > 0.0 && x <= 0.5)) throw precondition_error("kernel_integral: X must be in (0, 1/2]");
    if (spec.max_frequency < double(n))
        throw precondition_error("kernel_integral: spec.max_frequency must cover the oscillation n=" +
                                 std::to_string(n));
    auto f = [&](double alpha) {
        return detail::scaled_z_pow(1, big_n, alpha, mu) * cis_freq(-n, alpha);
    };
    // z^{-mu} is not band-limited: its peak at alpha = 0 lives on the scale
    // 1/(2 pi N) and needs panels of its own on top of the e(-n .) oscillation.
    const auto spec2 = detail::with_frequency(spec, double(n) + 8.0 * double(big_n));
    const auto q = integrate(f, -x, x, spec2);
    KernelResult r;
    r.value = q.value;
    r.error_estimate = q.error_estimate;
    r.main = std::exp(-double(n) / double(big_n)) * std::pow(double(n), mu - 1.0) / gamma_fn(mu);
    return r;
}

/// int_{-xi}^{xi} |S~_phi(alpha) - gamma_k (a_k z)^{-1/k}|^2 d alpha, the
/// squared major-arc approximation error. xi = 0 gives 0.
inline QuadResult<double> l2_error_integral(const IntPolynomial& phi, long long n, double xi,
                                            const TruncationPlan& plan, const QuadratureSpec& spec,
                                            const MangoldtTable& table, int threads = 1) {
    if (!(xi >= 0.0 && xi <= 0.5))
        throw precondition_error("l2_error_integral: xi must be in [0, 1/2]");
    if (xi == 0.0) return {};
    const DampedSeries series(phi, phi, n, plan, table);
    const int k = phi.degree();
    const long long a_k = phi.lead();
    const double g = gamma_const(k);
    auto f = [&](double alpha) {
        const std::complex<double> d =
            series(alpha) - g * detail::scaled_z_pow(a_k, n, alpha, 1.0 / double(k));
        return std::norm(d);
    };
    const auto spec2 = detail::with_frequency(spec, double(series.max_abs_freq()));
    return integrate(f, -xi, xi, spec2, threads);
}

/// F(tau) = int_0^tau |S~_phi(alpha)|^2 d alpha (one-sided; the integrand is
/// even, so the symmetric version is twice this).
inline QuadResult<double> tolev_F(const IntPolynomial& phi, long long n, double tau,
                                  const TruncationPlan& plan, const QuadratureSpec& spec,
                                  const MangoldtTable& table, int threads = 1) {
    if (!(tau > 0.0 && tau <= 0.5)) throw precondition_error("tolev_F: tau must be in (0, 1/2]");
    const DampedSeries series(phi, phi, n, plan, table);
    auto f = [&](double alpha) { return std::norm(series(alpha)); };
    const auto spec2 = detail::with_frequency(spec, double(series.max_abs_freq()));
    return integrate(f, 0.0, tau, spec2, threads);
}

struct I1Result {
    std::complex<double> value{}; // int_{-tau}^{tau} (a_k z)^{-j/k} U(-alpha,H) e(-N alpha)
    double companion = 0.0;       // a_k^{-j/k} gamma_{k,j}^{-1} sum e^{-n/N} n^{(j-k)/k}
    double error_estimate = 0.0;
};

/// Central approximant integral of the decomposition, with the damped power
/// sum it should reproduce once multiplied by gamma_k^j.
inline I1Result i1(long long n, long long h, int j, int k, long long a_k, double tau,
                   const QuadratureSpec& spec, int threads = 1) {
    if (n < 1 || h < 1 || j < 1 || k < 1 || a_k < 1)
        throw precondition_error("i1: needs N, H, j, k, a_k all >= 1");
    if (!(tau > 0.0 && tau <= 0.5)) throw precondition_error("i1: tau must be in (0, 1/2]");
    const double mu = double(j) / double(k);
    auto f = [&](double alpha) {
        return detail::scaled_z_pow(a_k, n, alpha, mu) * u_sum(-alpha, h) * cis_freq(-n, alpha);
    };
    // n + h covers U(-alpha) e(-n alpha); the extra 8n resolves the z^{-j/k}
    // peak at alpha = 0 (scale 1/(2 pi N)), which no bandwidth accounts for.
    const auto spec2 = detail::with_frequency(spec, double(n + h) + 8.0 * double(n));
    const auto q = integrate(f, -tau, tau, spec2, threads);
    I1Result r;
    r.value = q.value;
    r.error_estimate = q.error_estimate;
    double s = 0.0;
    for (long long m = n + 1; m <= n + h; ++m)
        s += std::exp(-double(m) / double(n)) * std::pow(double(m), mu - 1.0);
    r.companion = std::pow(double(a_k), -mu) / gamma_kj(k, j) * s;
    return r;
}

/// Central error integral: the j-th power of the series minus the j-th power
/// of its approximant, against the window kernel.
inline QuadResult<std::complex<double>> i2(const IntPolynomial& phi, int j, long long n, long long h,
                                           double tau, const TruncationPlan& plan,
                                           const QuadratureSpec& spec, const MangoldtTable& table,
                                           int threads = 1) {
    if (j < 1) throw precondition_error("i2: j must be >= 1");
    if (h < 1) throw precondition_error("i2: H must be >= 1");
    if (!(tau > 0.0 && tau <= 0.5)) throw precondition_error("i2: tau must be in (0, 1/2]");
    const DampedSeries series(phi, phi, n, plan, table);
    const int k = phi.degree();
    const long long a_k = phi.lead();
    const double gj = std::pow(gamma_const(k), double(j));
    const double mu = double(j) / double(k);
    auto f = [&](double alpha) {
        const std::complex<double> d =
            cpow_int(series(alpha), j) - gj * detail::scaled_z_pow(a_k, n, alpha, mu);
        return d * u_sum(-alpha, h) * cis_freq(-n, alpha);
    };
    const auto spec2 = detail::with_frequency(
        spec, double(j) * double(series.max_abs_freq()) + double(n + h));
    return integrate(f, -tau, tau, spec2, threads);
}

/// Flank integral over C = [-1/2, -tau] U [tau, 1/2].
inline QuadResult<std::complex<double>> i3(const IntPolynomial& phi, int j, long long n, long long h,
                                           double tau, const TruncationPlan& plan,
                                           const QuadratureSpec& spec, const MangoldtTable& table,
                                           int threads = 1) {
    if (j < 1) throw precondition_error("i3: j must be >= 1");
    if (h < 1) throw precondition_error("i3: H must be >= 1");
    if (!(tau > 0.0 && tau <= 0.5)) throw precondition_error("i3: tau must be in (0, 1/2]");
    QuadResult<std::complex<double>> out;
    if (tau == 0.5) return out;
    const DampedSeries series(phi, phi, n, plan, table);
    auto f = [&](double alpha) {
        return cpow_int(series(alpha), j) * u_sum(-alpha, h) * cis_freq(-n, alpha);
    };
    const auto spec2 = detail::with_frequency(
        spec, double(j) * double(series.max_abs_freq()) + double(n + h));
    const auto left = integrate(f, -0.5, -tau, spec2, threads);
    const auto right = integrate(f, tau, 0.5, spec2, threads);
    out.value = left.value + right.value;
    out.error_estimate = left.error_estimate + right.error_estimate;
    out.panels = left.panels + right.panels;
    return out;
}

/// Trapezoid evaluation of the full-circle integral
///   sum_{n=N+1}^{N+H} int_{-1/2}^{1/2} S~_phi(alpha)^j e(-n alpha) d alpha
/// as (1/M) sum_m S~(m/M)^j U(-m/M, H) e(-N m/M). The integrand is a
/// trigonometric polynomial, so the grid sum is exact once M_g exceeds its
/// bandwidth j*max|phi| + N + H; the result is real up to rounding, and an
/// imaginary part above 1e-8 (relative) trips a tolerance error.
inline double full_circle_sum(const IntPolynomial& phi, int j, long long n, long long h,
                              const TruncationPlan& plan, long long m_g, const MangoldtTable& table) {
    if (j < 1) throw precondition_error("full_circle_sum: j must be >= 1");
    if (h < 1) throw precondition_error("full_circle_sum: H must be >= 1");
    const DampedSeries series(phi, phi, n, plan, table);
    const long long band = series.max_abs_freq();
    const long long need = j * band + n + h;
    if (m_g <= need)
        throw precondition_error("full_circle_sum: exactness needs M_g > j*band + N + H = " +
                                 std::to_string(need) + ", have M_g = " + std::to_string(m_g));
    const cvec grid = grid_eval(series, m_g);
    std::complex<double> acc{0.0, 0.0};
    for (long long m = 0; m < m_g; ++m) {
        const std::complex<double> term = cpow_int(grid[std::size_t(m)], j) * u_sum_at(-m, m_g, h) *
                                          cis2pi(prodratio_mod1(-n, m, m_g));
        acc += term;
    }
    acc /= double(m_g);
    if (std::abs(acc.imag()) > 1e-8 * std::max(1.0, std::abs(acc.real())))
        throw tolerance_error("full_circle_sum: imaginary residue " + std::to_string(acc.imag()) +
                              " too large");
    return acc.real();
}

struct DampedPowerSum {
    double exact = 0.0;      // sum_{n=N+1}^{N+H} e^{-n/N} n^lambda
    double asymptotic = 0.0; // e^{-1} H N^lambda
};

/// The window power sum next to its first-order value; their gap is
/// O(H^2 N^{lambda - 1}).
inline DampedPowerSum damped_power_sum(long long n, long long h, double lambda) {
    if (n < 1) throw precondition_error("damped_power_sum: N must be >= 1");
    if (h < 0 || h > n) throw precondition_error("damped_power_sum: needs 0 <= H <= N");
    DampedPowerSum r;
    for (long long m = n + 1; m <= n + h; ++m)
        r.exact += std::exp(-double(m) / double(n)) * std::pow(double(m), lambda);
    r.asymptotic = std::exp(-1.0) * double(h) * std::pow(double(n), lambda);
    return r;
}

} // namespace polyrep
