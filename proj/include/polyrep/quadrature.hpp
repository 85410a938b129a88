#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "polyrep/errors.hpp"

namespace polyrep {

/// Composite Gauss-Legendre controls. `max_frequency` is the largest
/// oscillation frequency (in cycles per unit) the integrand contains; the
/// panel count is raised until each panel spans at most a quarter period.
struct QuadratureSpec {
    long long panel_count = 1;  // lower bound on panels
    int nodes_per_panel = 6;    // Gauss-Legendre order per panel
    double max_frequency = 0.0; // cycles per unit length in the integrand
    double abs_tol = 1e-9;      // cap on the resolution-doubling estimate
};

struct GaussRule {
    std::vector<double> node, weight; // on [-1, 1]
};

/// Nodes and weights of the q-point Gauss-Legendre rule, by Newton iteration
/// on the Legendre recurrence.
inline GaussRule gauss_legendre(int q) {
    if (q < 2 || q > 32) throw precondition_error("gauss_legendre: order must be in [2, 32]");
    GaussRule r;
    r.node.assign(std::size_t(q), 0.0);
    r.weight.assign(std::size_t(q), 0.0);
    const int m = (q + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (double(i) + 0.75) / (double(q) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < q; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - double(j) * p3) / (double(j) + 1.0);
            }
            pp = double(q) * (x * p1 - p2) / (x * x - 1.0);
            const double x1 = x;
            x = x1 - p1 / pp;
            if (std::abs(x - x1) <= 1e-15) break;
        }
        r.node[std::size_t(i)] = -x;
        r.node[std::size_t(q - 1 - i)] = x;
        r.weight[std::size_t(i)] = r.weight[std::size_t(q - 1 - i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

/// Panels needed on [a, b]: at least spec.panel_count, and at least four per
/// oscillation of the fastest component.
inline long long panels_for(const QuadratureSpec& spec, double a, double b) {
    if (spec.panel_count < 1) throw precondition_error("quadrature: panel_count must be >= 1");
    long long p = spec.panel_count;
    if (spec.max_frequency > 0.0) {
        const double need = (b - a) * 4.0 * spec.max_frequency;
        if (need > 4e9) throw precondition_error("quadrature: oscillation count too large");
        p = std::max<long long>(p, (long long)std::ceil(need));
    }
    return std::max<long long>(p, 1);
}

/// Panel sweep with a fixed chunk tree: partials are always accumulated over
/// the same 1024-way split and summed in chunk order, so the result is
/// bit-identical at every thread count (threads only decide who fills which
/// chunk). The integrand must be safe to call concurrently.
template <class F>
auto integrate_fixed(F&& f, double a, double b, long long panels, const GaussRule& rule,
                     int threads = 1) {
    using R = std::invoke_result_t<F&, double>;
    const long long chunks = std::min<long long>(panels, 1024);
    std::vector<R> partial(std::size_t(chunks), R{});
    auto chunk_sum = [&](long long ci) {
        const long long p0 = panels * ci / chunks, p1 = panels * (ci + 1) / chunks;
        R acc{};
        for (long long p = p0; p < p1; ++p) {
            const double x0 = a + (b - a) * (double(p) / double(panels));
            const double x1 = a + (b - a) * (double(p + 1) / double(panels));
            const double mid = 0.5 * (x0 + x1), hw = 0.5 * (x1 - x0);
            R acc_p{};
            for (std::size_t i = 0; i < rule.node.size(); ++i)
                acc_p += rule.weight[i] * f(mid + hw * rule.node[i]);
            acc += hw * acc_p;
        }
        partial[std::size_t(ci)] = acc;
    };
    if (threads <= 1 || chunks < 2) {
        for (long long ci = 0; ci < chunks; ++ci) chunk_sum(ci);
    } else {
        std::atomic<long long> next{0};
        std::exception_ptr first;
        std::mutex mu;
        std::vector<std::thread> pool;
        for (long long w = std::min<long long>(threads, chunks); w > 0; --w)
            pool.emplace_back([&] {
                try {
                    for (long long ci = next.fetch_add(1); ci < chunks; ci = next.fetch_add(1))
                        chunk_sum(ci);
                } catch (...) {
                    const std::lock_guard<std::mutex> g(mu);
                    if (!first) first = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        if (first) std::rethrow_exception(first);
    }
    R total{};
    for (const R& x : partial) total += x;
    return total;
}

template <class R>
struct QuadResult {
    R value{};
    double error_estimate = 0.0; // |value(2P panels) - value(P panels)|
    long long panels = 0;        // panels of the reported value
};

/// Composite Gauss-Legendre on [a, b] with the panel-per-oscillation
/// invariant, reported at doubled resolution. The doubling difference is the
/// error estimate; exceeding spec.abs_tol raises tolerance_error.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec, int threads = 1)
    -> QuadResult<std::invoke_result_t<F&, double>> {
    using R = std::invoke_result_t<F&, double>;
    if (!(a <= b)) throw precondition_error("integrate: needs a <= b");
    if (a == b) return QuadResult<R>{};
    const GaussRule rule = gauss_legendre(spec.nodes_per_panel);
    const long long p = panels_for(spec, a, b);
    const R q1 = integrate_fixed(f, a, b, p, rule, threads);
    const R q2 = integrate_fixed(f, a, b, 2 * p, rule, threads);
    const double est = std::abs(q2 - q1);
    if (!(est <= spec.abs_tol))
        throw tolerance_error("integrate: doubling estimate " + std::to_string(est) +
                              " exceeds abs_tol " + std::to_string(spec.abs_tol) + " on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    return QuadResult<R>{q2, est, 2 * p};
}

} // namespace polyrep
