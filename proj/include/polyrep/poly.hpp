#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/numeric.hpp"

namespace polyrep {

// The perturbation part of a polynomial, phi - lead*n^k. Unlike IntPolynomial
// its leading coefficient may be negative.
struct Eta {
    std::vector<long long> coeffs; // a_1..a_d, low degree first, a_d != 0
    int degree = 0;

    int128 eval(long long n) const {
        int128 acc = 0;
        for (int h = degree; h >= 1; --h) {
            acc = checked_mul(acc, n);
            acc = checked_add(acc, coeffs[std::size_t(h) - 1]);
        }
        return checked_mul(acc, n);
    }
};

/// Integer polynomial phi(n) = a_1 n + a_2 n^2 + ... + a_k n^k with zero
/// constant term and a_k >= 1. Coefficients below the lead may be negative.
/// Integer evaluation is exact: it runs in 128-bit arithmetic and throws
/// std::overflow_error instead of wrapping.
class IntPolynomial {
public:
    explicit IntPolynomial(std::vector<long long> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw precondition_error("polynomial needs at least one coefficient");
        if (coeffs_.back() < 1) throw precondition_error("leading coefficient must be >= 1");
    }

    static IntPolynomial monomial(int k, long long lead = 1) {
        if (k < 1) throw precondition_error("monomial degree must be >= 1");
        std::vector<long long> c(std::size_t(k), 0);
        c.back() = lead;
        return IntPolynomial(std::move(c));
    }

    // Text form "a1,a2,...,ak", low degree first.
    static IntPolynomial parse(std::string_view text) {
        std::vector<long long> c;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
            while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
            long long v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw config_error("bad polynomial coefficient '" + std::string(tok) + "' in '" + std::string(text) + "'");
            c.push_back(v);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (c.empty() || c.back() < 1)
            throw config_error("polynomial '" + std::string(text) + "' must have leading coefficient >= 1");
        return IntPolynomial(std::move(c));
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s.push_back(',');
            s += std::to_string(coeffs_[i]);
        }
        return s;
    }

    int degree() const { return int(coeffs_.size()); }
    long long lead() const { return coeffs_.back(); }
    const std::vector<long long>& coeffs() const { return coeffs_; }

    bool operator==(const IntPolynomial& o) const { return coeffs_ == o.coeffs_; }

    // Exact phi(n) for n >= 0, by Horner in 128-bit checked arithmetic.
    int128 eval(long long n) const {
        if (n < 0) throw precondition_error("eval expects n >= 0");
        int128 acc = 0;
        for (int h = degree(); h >= 1; --h) {
            acc = checked_mul(acc, n);
            acc = checked_add(acc, coeffs_[std::size_t(h) - 1]);
        }
        return checked_mul(acc, n);
    }

    // phi(n) narrowed to 64 bits; throws std::overflow_error if it does not fit.
    long long eval_i64(long long n) const {
        return checked_narrow(eval(n), "phi(n)");
    }

    // phi(x) at a real argument (double Horner; used for bisection only).
    double eval_real(double x) const {
        double acc = 0.0;
        for (int h = degree(); h >= 1; --h) acc = acc * x + double(coeffs_[std::size_t(h) - 1]);
        return acc * x;
    }

    // eta = phi - lead*n^k; nullopt when phi is the pure monomial lead*n^k.
    std::optional<Eta> eta() const {
        int d = 0;
        for (int h = degree() - 1; h >= 1; --h) {
            if (coeffs_[std::size_t(h) - 1] != 0) { d = h; break; }
        }
        if (d == 0) return std::nullopt;
        Eta e;
        e.degree = d;
        e.coeffs.assign(coeffs_.begin(), coeffs_.begin() + d);
        return e;
    }

    // First m where the finite-difference certificate holds: D^1 phi(m) > 0 and
    // D^i phi(m) >= 0 for 1 < i < k. Since D^k phi = k! * a_k > 0 is constant,
    // every difference order is nondecreasing from m on, so phi is increasing
    // and discretely convex for all n >= m.
    long long certified_growth_point() const {
        const int k = degree();
        // diff[i] = D^{i+1} phi(m), i = 0..k-1
        std::vector<int128> diff(static_cast<std::size_t>(k));
        long long m = 0;
        {
            std::vector<int128> vals(std::size_t(k) + 1);
            for (int i = 0; i <= k; ++i) vals[std::size_t(i)] = eval(m + i);
            for (int ord = 1; ord <= k; ++ord) {
                for (int i = 0; i <= k - ord; ++i)
                    vals[std::size_t(i)] = vals[std::size_t(i) + 1] - vals[std::size_t(i)];
                diff[std::size_t(ord) - 1] = vals[0];
            }
        }
        auto certified = [&]() {
            if (diff[0] <= 0) return false;
            for (int i = 1; i + 1 < k; ++i)
                if (diff[std::size_t(i)] < 0) return false;
            return true;
        };
        while (!certified()) {
            for (int i = 0; i + 1 < k; ++i) diff[std::size_t(i)] += diff[std::size_t(i) + 1];
            ++m;
        }
        return m;
    }

    // Smallest n0 with phi(n+1) > phi(n) for all n >= n0. The certificate
    // point can overshoot the true threshold, so walk back while the first
    // difference stays positive.
    long long monotone_threshold() const {
        long long m = certified_growth_point();
        while (m > 0 && eval(m) - eval(m - 1) > 0) --m;
        return m;
    }

    // The unique real x >= monotone_threshold() with phi(x) = y, to relative
    // accuracy 1e-12. Bisection inside the integer bracket phi(m) <= y < phi(m+1).
    double inverse_at(double y) const {
        const long long n0 = monotone_threshold();
        const double y0 = static_cast<double>(eval(n0));
        if (y < y0)
            throw precondition_error("inverse_at: y below phi(monotone_threshold)");
        // Exponential search for an upper bracket, seeded near y^{1/k}.
        long long hi = n0 + 1;
        const double seed = std::pow(std::max(y, 1.0) / double(lead()), 1.0 / degree());
        if (seed > double(hi) && seed < 9e17) hi = static_cast<long long>(seed) + 2;
        while (static_cast<double>(eval(hi)) <= y) {
            if (hi > (1LL << 61)) throw precondition_error("inverse_at: bracket overflow");
            hi = hi < 2 ? 2 : hi * 2;
        }
        long long lo = n0;
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (static_cast<double>(eval(mid)) <= y) lo = mid;
            else hi = mid;
        }
        // Real bisection in [lo, lo+1].
        double a = double(lo), b = double(lo) + 1.0;
        if (eval_real(a) == y) return a;
        for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, a); ++it) {
            double mid = 0.5 * (a + b);
            if (eval_real(mid) <= y) a = mid;
            else b = mid;
        }
        return 0.5 * (a + b);
    }

private:
    std::vector<long long> coeffs_;
};

} // namespace polyrep
