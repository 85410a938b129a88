#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polyrep/arcintegral.hpp"
#include "polyrep/arcsum.hpp"
#include "polyrep/config.hpp"
#include "polyrep/errors.hpp"
#include "polyrep/mangoldt.hpp"
#include "polyrep/repcount.hpp"
#include "polyrep/report.hpp"
#include "polyrep/svg.hpp"

namespace polyrep {

struct RunResult {
    Report report;
    std::string verdict;
};

namespace detail {

// Ordered parallel map: fn(i) fills slot i of some preallocated output, so
// assembly order never depends on scheduling. The first exception wins and is
// rethrown on the caller thread.
template <class Fn>
void parallel_for_indexed(std::size_t count, int threads, Fn&& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex emu;
    std::exception_ptr eptr;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(emu);
                if (!eptr) eptr = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t tn = std::min<std::size_t>(std::size_t(threads), count);
    pool.reserve(tn);
    for (std::size_t t = 0; t < tn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (eptr) std::rethrow_exception(eptr);
}

// Re-raise the in-flight exception with the failing N spelled out, keeping
// its type (and thus the exit code) intact.
[[noreturn]] inline void rethrow_with_n(long long n) {
    const std::string tag = "N=" + std::to_string(n) + ": ";
    try {
        throw;
    } catch (const cache_error& e) {
        throw cache_error(e.what_kind(), tag + e.what());
    } catch (const config_error& e) {
        throw config_error(tag + e.what());
    } catch (const tolerance_error& e) {
        throw tolerance_error(tag + e.what());
    } catch (const precondition_error& e) {
        throw precondition_error(tag + e.what());
    } catch (const std::overflow_error& e) {
        throw std::overflow_error(tag + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(tag + e.what());
    }
}

inline std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

/// Table covering `required`: from the configured cache when present and big
/// enough, otherwise freshly built (and persisted back when a path is set).
/// A corrupt cache file propagates its cache_error instead of being silently
/// overwritten.
inline MangoldtTable ensure_table(const ExperimentConfig& c, long long required) {
    required = std::max<long long>(required, 10);
    if (!c.sieve_cache.empty() && std::filesystem::exists(c.sieve_cache)) {
        MangoldtTable t = load_cache(c.sieve_cache);
        if (t.limit >= required) return t;
    }
    MangoldtTable t = build_mangoldt(required);
    if (!c.sieve_cache.empty()) save_cache(t, c.sieve_cache);
    return t;
}

/// Short-interval average experiment: exact window sums against the predicted
/// main term across the N grid. Verdict reports whether |ratio - 1| improved
/// from the first grid point to the last.
inline RunResult run_average(const ExperimentConfig& c) {
    validate_config(c);
    validate_theorem_mode(c);
    RunResult out;
    out.report.columns = {"N", "H", "interval_sum", "main_term", "ratio", "abs_err", "a_ref"};
    if (c.n_grid.empty()) {
        out.verdict = "empty n_grid";
        return out;
    }
    const int k = c.phi.degree();
    long long required = 0;
    for (long long n : c.n_grid)
        required = std::max(required, required_sieve_limit(c.phi, c.j, n, c.h_for(n)));
    const MangoldtTable table = ensure_table(c, required);
    std::vector<std::vector<double>> rows(c.n_grid.size());
    const int inner = c.n_grid.size() == 1 ? c.threads : 1;
    detail::parallel_for_indexed(c.n_grid.size(), c.threads, [&](std::size_t i) {
        const long long n = c.n_grid[i];
        try {
            const long long h = c.h_for(n);
            const RepSeries r = rep_convolve(c.phi, c.j, n, h, table, ConvMethod::auto_select, inner);
            const double s = interval_sum(r);
            const double mt = main_term(n, double(h), c.j, k, c.phi.lead());
            const double ratio = s / mt;
            rows[i] = {double(n), double(h), s,     mt,
                       ratio,     std::abs(ratio - 1.0), a_factor(n, -1.0)};
        } catch (...) {
            detail::rethrow_with_n(n);
        }
    });
    for (auto& r : rows) out.report.rows.push_back(std::move(r));
    const double first = out.report.rows.front()[5], last = out.report.rows.back()[5];
    out.verdict = "|ratio-1| " + detail::short_num(first) + " (N=" +
                  std::to_string(c.n_grid.front()) + ") -> " + detail::short_num(last) + " (N=" +
                  std::to_string(c.n_grid.back()) + "): " +
                  (last < first ? "improving" : "not improving");
    return out;
}

/// Circle-method decomposition audit at a single N: the three arc integrals,
/// their sum, the exact full-circle value, and the weighted window sum, with
/// the two residuals that tie them together.
inline RunResult run_decomposition(const ExperimentConfig& c, long long n) {
    validate_config(c);
    validate_theorem_mode(c);
    if (n < 16) throw config_error("run_decomposition: N must be >= 16");
    RunResult out;
    out.report.columns = {"N",     "H",      "tau",    "g_i1_re", "g_i1_im",
                          "i2_re", "i2_im",  "i3_re",  "i3_im",   "sum_re",
                          "sum_im", "full_circle", "weighted_sum", "resid_decomp", "resid_circle"};
    try {
        const int k = c.phi.degree();
        const long long a_k = c.phi.lead();
        const long long h = c.h_for(n);
        const double tau = c.tau_for(n);
        const TruncationPlan plan = plan_truncation(c.phi, n, c.truncation_tol);
        const long long required =
            std::max(required_sieve_limit(c.phi, c.j, n, h), plan.radius);
        const MangoldtTable table = ensure_table(c, required);
        const QuadratureSpec spec{1, 6, 0.0, c.quadrature_tol};

        const double gj = std::pow(gamma_const(k), double(c.j));
        const I1Result r1 = i1(n, h, c.j, k, a_k, tau, spec, c.threads);
        const auto r2 = i2(c.phi, c.j, n, h, tau, plan, spec, table, c.threads);
        const auto r3 = i3(c.phi, c.j, n, h, tau, plan, spec, table, c.threads);
        const DampedSeries series(c.phi, c.phi, n, plan, table);
        const long long m_g = (long long)next_pow2(
            std::size_t(c.j * series.max_abs_freq() + n + h + 1));
        const double fc = full_circle_sum(c.phi, c.j, n, h, plan, m_g, table);
        const double ws =
            weighted_interval_sum(rep_convolve(c.phi, c.j, n, h, table, ConvMethod::auto_select, c.threads));
        const std::complex<double> g1 = gj * r1.value;
        const std::complex<double> sum = g1 + r2.value + r3.value;
        const double resid_decomp = std::abs(sum - std::complex<double>(fc, 0.0));
        const double resid_circle = std::abs(fc - ws);
        out.report.add_row({double(n), double(h), tau, g1.real(), g1.imag(), r2.value.real(),
                            r2.value.imag(), r3.value.real(), r3.value.imag(), sum.real(), sum.imag(),
                            fc, ws, resid_decomp, resid_circle});
        std::ostringstream v;
        v << "resid_decomp=" << detail::short_num(resid_decomp)
          << " resid_circle=" << detail::short_num(resid_circle) << " |I2|/|g^j I1|="
          << detail::short_num(std::abs(r2.value) / std::abs(g1)) << " |I3|/|g^j I1|="
          << detail::short_num(std::abs(r3.value) / std::abs(g1));
        out.verdict = v.str();
    } catch (...) {
        detail::rethrow_with_n(n);
    }
    return out;
}

/// Major-arc L2 error against its lemma shape N^{2/k-1}, over the N grid,
/// with xi = N^{-1+13/(15k)-epsilon}.
inline RunResult run_l2_scaling(const ExperimentConfig& c) {
    validate_config(c);
    RunResult out;
    out.report.columns = {"N", "xi", "l2_value", "shape", "ratio"};
    if (c.n_grid.empty()) {
        out.verdict = "empty n_grid";
        return out;
    }
    const int k = c.phi.degree();
    long long required = 0;
    std::vector<TruncationPlan> plans(c.n_grid.size());
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        plans[i] = plan_truncation(c.phi, c.n_grid[i], c.truncation_tol);
        required = std::max(required, plans[i].radius);
    }
    const MangoldtTable table = ensure_table(c, required);
    std::vector<std::vector<double>> rows(c.n_grid.size());
    const int inner = c.n_grid.size() == 1 ? c.threads : 1;
    detail::parallel_for_indexed(c.n_grid.size(), c.threads, [&](std::size_t i) {
        const long long n = c.n_grid[i];
        try {
            const double xi = std::pow(double(n), -1.0 + 13.0 / (15.0 * k) - c.epsilon);
            const QuadratureSpec spec{1, 6, 0.0, c.quadrature_tol};
            const double v = l2_error_integral(c.phi, n, xi, plans[i], spec, table, inner).value;
            const double shape = std::pow(double(n), 2.0 / double(k) - 1.0);
            rows[i] = {double(n), xi, v, shape, v / shape};
        } catch (...) {
            detail::rethrow_with_n(n);
        }
    });
    for (auto& r : rows) out.report.rows.push_back(std::move(r));
    double rmin = out.report.rows.front()[4], rmax = rmin;
    bool monotone_up = true;
    for (std::size_t i = 0; i < out.report.rows.size(); ++i) {
        const double r = out.report.rows[i][4];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        if (i && r <= out.report.rows[i - 1][4]) monotone_up = false;
    }
    out.verdict = "ratio in [" + detail::short_num(rmin) + ", " + detail::short_num(rmax) +
                  "], max/min=" + detail::short_num(rmax / rmin) +
                  (monotone_up && out.report.rows.size() > 1 ? " (monotone growth)" : " (bounded)");
    return out;
}

/// Mean-square mass of the series near 0 against the lemma shape
/// (tau N^{1/k} + N^{2/k-1}) log^4 N, for tau = N^{-0.6}, N^{-0.7}, N^{-0.8}.
inline RunResult run_tolev_scaling(const ExperimentConfig& c) {
    validate_config(c);
    RunResult out;
    out.report.columns = {"N", "tau", "F_value", "shape", "ratio"};
    if (c.n_grid.empty()) {
        out.verdict = "empty n_grid";
        return out;
    }
    const int k = c.phi.degree();
    static constexpr double tau_exponents[3] = {-0.6, -0.7, -0.8};
    long long required = 0;
    std::vector<TruncationPlan> plans(c.n_grid.size());
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        plans[i] = plan_truncation(c.phi, c.n_grid[i], c.truncation_tol);
        required = std::max(required, plans[i].radius);
    }
    const MangoldtTable table = ensure_table(c, required);
    const std::size_t count = c.n_grid.size() * 3;
    std::vector<std::vector<double>> rows(count);
    const int inner = count == 1 ? c.threads : 1;
    detail::parallel_for_indexed(count, c.threads, [&](std::size_t item) {
        const std::size_t i = item / 3;
        const long long n = c.n_grid[i];
        try {
            const double tau = std::pow(double(n), tau_exponents[item % 3]);
            const QuadratureSpec spec{1, 6, 0.0, c.quadrature_tol};
            const double v = tolev_F(c.phi, n, tau, plans[i], spec, table, inner).value;
            const double l = std::log(double(n));
            const double shape =
                (tau * std::pow(double(n), 1.0 / double(k)) +
                 std::pow(double(n), 2.0 / double(k) - 1.0)) * l * l * l * l;
            rows[item] = {double(n), tau, v, shape, v / shape};
        } catch (...) {
            detail::rethrow_with_n(n);
        }
    });
    for (auto& r : rows) out.report.rows.push_back(std::move(r));
    double rmin = out.report.rows.front()[4], rmax = rmin;
    for (const auto& r : out.report.rows) {
        rmin = std::min(rmin, r[4]);
        rmax = std::max(rmax, r[4]);
    }
    out.verdict = "ratio in [" + detail::short_num(rmin) + ", " + detail::short_num(rmax) +
                  "], max/min=" + detail::short_num(rmax / rmin);
    return out;
}

/// Kernel-lemma sweep over (mu, n, X) at the first grid N: quadrature against
/// the closed form, each gap scored against its 1/(n X^mu) budget.
inline RunResult run_kernel_check(const ExperimentConfig& c) {
    validate_config(c);
    RunResult out;
    out.report.columns = {"mu", "n", "X", "int_re", "int_im", "main", "abs_err", "bound", "ratio"};
    if (c.n_grid.empty()) {
        out.verdict = "empty n_grid";
        return out;
    }
    const long long big_n = c.n_grid.front();
    const long long h = c.h_for(big_n);
    static constexpr double mus[4] = {0.5, 1.0, 1.5, 2.0};
    const long long ns[2] = {big_n, big_n + h};
    static constexpr double xs[2] = {0.25, 0.5};
    const std::size_t count = 4 * 2 * 2;
    std::vector<std::vector<double>> rows(count);
    detail::parallel_for_indexed(count, c.threads, [&](std::size_t item) {
        const double mu = mus[item / 4];
        const long long n = ns[(item / 2) % 2];
        const double x = xs[item % 2];
        try {
            QuadratureSpec spec{1, 6, double(n), c.quadrature_tol};
            const KernelResult kr = kernel_integral(big_n, mu, n, x, spec);
            const double err = std::abs(kr.value - std::complex<double>(kr.main, 0.0));
            const double bound = 1.0 / (double(n) * std::pow(x, mu));
            rows[item] = {mu, double(n), x, kr.value.real(), kr.value.imag(), kr.main, err, bound,
                          err / bound};
        } catch (...) {
            detail::rethrow_with_n(n);
        }
    });
    for (auto& r : rows) out.report.rows.push_back(std::move(r));
    double worst = 0.0, worst_small = 0.0, worst_large = 0.0;
    for (const auto& r : out.report.rows) {
        worst = std::max(worst, r[8]);
        double& slot = (r[2] == 0.25) ? worst_small : worst_large;
        slot = std::max(slot, r[8]);
    }
    out.verdict = "max ratio " + detail::short_num(worst) + " (X=1/4: " +
                  detail::short_num(worst_small) + ", X=1/2: " + detail::short_num(worst_large) + ")";
    return out;
}

/// One SVG per non-leading column, plotted against the first column.
/// Deterministic bytes for identical input; empty reports produce no files.
inline std::vector<std::string> emit_plots(const Report& r, const std::string& out_dir) {
    std::vector<std::string> written;
    if (r.rows.empty() || r.columns.size() < 2) return written;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    for (std::size_t yi = 1; yi < r.columns.size(); ++yi) {
        const std::string name = detail::sanitize_name(r.columns[yi]) + "_vs_" +
                                 detail::sanitize_name(r.columns[0]) + ".svg";
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        std::ofstream f(path, std::ios::trunc | std::ios::binary);
        if (!f) throw precondition_error("emit_plots: cannot write " + path);
        f << line_chart_svg(r, yi);
        if (!f) throw precondition_error("emit_plots: write failed for " + path);
        written.push_back(path);
    }
    return written;
}

} // namespace polyrep
