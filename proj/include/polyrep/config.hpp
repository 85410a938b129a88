#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "polyrep/errors.hpp"
#include "polyrep/poly.hpp"

namespace polyrep {

/// One experiment's full parameterization. B is not free: B = N^{2 epsilon}.
struct ExperimentConfig {
    IntPolynomial phi = IntPolynomial::monomial(2);
    int j = 2;
    double epsilon = 0.05;
    std::vector<long long> n_grid;
    double h_exponent = 0.8;        // H = round(N^theta)
    double truncation_tol = 1e-12;  // plan_truncation tolerance
    double quadrature_tol = 1e-6;   // abs_tol for every quadrature
    std::string sieve_cache;        // empty: build in memory, never persist
    std::string out_dir = ".";
    int threads = 1;

    double b_exponent() const { return 2.0 * epsilon; }
    long long h_for(long long n) const {
        return (long long)std::llround(std::pow(double(n), h_exponent));
    }
    double b_for(long long n) const { return std::pow(double(n), b_exponent()); }
    double tau_for(long long n) const { return b_for(n) / double(h_for(n)); }

    bool operator==(const ExperimentConfig& o) const {
        return phi == o.phi && j == o.j && epsilon == o.epsilon && n_grid == o.n_grid &&
               h_exponent == o.h_exponent && truncation_tol == o.truncation_tol &&
               quadrature_tol == o.quadrature_tol && sieve_cache == o.sieve_cache &&
               out_dir == o.out_dir && threads == o.threads;
    }
};

/// The theorem's admissible short-interval window (N^{1-13/(15k)+eps}, N^{1-eps}).
inline std::pair<double, double> admissible_h_window(long long n, int k, double epsilon) {
    if (n < 16) throw precondition_error("admissible_h_window: N must be >= 16");
    if (k < 2) throw precondition_error("admissible_h_window: k must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 13.0 / (30.0 * k)))
        throw config_error("admissible_h_window: empty window, epsilon must be in (0, 13/(30k)) = (0, " +
                           std::to_string(13.0 / (30.0 * k)) + ")");
    const double lo_exp = 1.0 - 13.0 / (15.0 * k) + epsilon;
    const double hi_exp = 1.0 - epsilon;
    return {std::pow(double(n), lo_exp), std::pow(double(n), hi_exp)};
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace((unsigned char)s[b])) ++b;
    while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_real(const std::string& v, const std::string& key) {
    double out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw config_error("config: bad real for " + key + ": '" + v + "'");
    return out;
}

inline long long parse_int(const std::string& v, const std::string& key) {
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw config_error("config: bad integer for " + key + ": '" + v + "'");
    return out;
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Checks every field and, for k >= 2, the theorem window on theta. k = 1 has
/// no admissible window (the theorem needs k >= 2), so theta is unconstrained
/// there and only the lemma-level experiments apply.
inline void validate_config(const ExperimentConfig& c) {
    if (!(c.epsilon > 0.0 && c.epsilon < 0.25))
        throw config_error("config: epsilon must be in (0, 1/4), have " + std::to_string(c.epsilon));
    if (c.j < 1) throw config_error("config: j must be >= 1");
    if (c.threads < 1) throw config_error("config: threads must be >= 1");
    if (!(c.truncation_tol > 0.0)) throw config_error("config: truncation_tol must be > 0");
    if (!(c.quadrature_tol > 0.0)) throw config_error("config: quadrature_tol must be > 0");
    for (long long n : c.n_grid)
        if (n < 16) throw config_error("config: every n_grid entry must be >= 16");
    const int k = c.phi.degree();
    if (k >= 2) {
        if (!(c.epsilon < 13.0 / (30.0 * k)))
            throw config_error("config: empty admissible window, epsilon must be < 13/(30k) = " +
                               std::to_string(13.0 / (30.0 * k)) + " for k = " + std::to_string(k));
        const double lo = 1.0 - 13.0 / (15.0 * k) + c.epsilon;
        const double hi = 1.0 - c.epsilon;
        if (!(c.h_exponent > lo && c.h_exponent < hi))
            throw config_error("config: h_exponent " + std::to_string(c.h_exponent) +
                               " outside admissible window (" + std::to_string(lo) + ", " +
                               std::to_string(hi) + ") for k = " + std::to_string(k) +
                               ", epsilon = " + std::to_string(c.epsilon));
    }
}

/// Extra requirement for the theorem-level experiments (avg, decomp).
inline void validate_theorem_mode(const ExperimentConfig& c) {
    const int k = c.phi.degree();
    if (k < 2 || c.j < k)
        throw config_error("config: theorem experiments need j >= k >= 2, have j = " +
                           std::to_string(c.j) + ", k = " + std::to_string(k));
}

/// Line-oriented "key = value" text; '#' comments and [section] headers pass
/// through, unknown keys are rejected.
inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string val = detail::trim(std::string_view(t).substr(eq + 1));
        if (key == "phi") c.phi = IntPolynomial::parse(val);
        else if (key == "j") c.j = int(detail::parse_int(val, key));
        else if (key == "epsilon") c.epsilon = detail::parse_real(val, key);
        else if (key == "h_exponent") c.h_exponent = detail::parse_real(val, key);
        else if (key == "truncation_tol") c.truncation_tol = detail::parse_real(val, key);
        else if (key == "quadrature_tol") c.quadrature_tol = detail::parse_real(val, key);
        else if (key == "sieve_cache") c.sieve_cache = val;
        else if (key == "out_dir") c.out_dir = val;
        else if (key == "threads") c.threads = int(detail::parse_int(val, key));
        else if (key == "n_grid") {
            c.n_grid.clear();
            std::size_t pos = 0;
            while (pos <= val.size() && !val.empty()) {
                const std::size_t comma = val.find(',', pos);
                const std::string tok = detail::trim(
                    std::string_view(val).substr(pos, comma == std::string::npos ? std::string::npos
                                                                                 : comma - pos));
                if (!tok.empty()) c.n_grid.push_back(detail::parse_int(tok, key));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else {
            throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    validate_config(c);
    return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

/// Canonical text form; parse(serialize(c)) == c.
inline std::string serialize_config(const ExperimentConfig& c) {
    std::string s = "[experiment]\n";
    s += "phi = " + c.phi.to_string() + "\n";
    s += "j = " + std::to_string(c.j) + "\n";
    s += "epsilon = " + detail::format_real(c.epsilon) + "\n";
    s += "n_grid = ";
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c.n_grid[i]);
    }
    s += "\n";
    s += "h_exponent = " + detail::format_real(c.h_exponent) + "\n";
    s += "truncation_tol = " + detail::format_real(c.truncation_tol) + "\n";
    s += "quadrature_tol = " + detail::format_real(c.quadrature_tol) + "\n";
    s += "sieve_cache = " + c.sieve_cache + "\n";
    s += "out_dir = " + c.out_dir + "\n";
    s += "threads = " + std::to_string(c.threads) + "\n";
    return s;
}

} // namespace polyrep
