#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "polyrep/report.hpp"

namespace polyrep {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string sanitize_name(const std::string& s) {
    std::string out;
    for (char ch : s)
        out.push_back(std::isalnum((unsigned char)ch) ? ch : '_');
    return out;
}

} // namespace detail

/// One standalone line chart: column `yi` of the report against its first
/// column, log-x when all x are positive. Fixed geometry and number
/// formatting keep the bytes identical across runs.
inline std::string line_chart_svg(const Report& r, std::size_t yi) {
    const double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<double> xs, ys;
    for (const auto& row : r.rows) {
        xs.push_back(row[0]);
        ys.push_back(row[yi]);
    }
    bool logx = !xs.empty();
    for (double x : xs)
        if (!(x > 0.0)) logx = false;
    std::vector<double> tx = xs;
    if (logx)
        for (double& x : tx) x = std::log10(x);
    double x0 = tx.empty() ? 0 : *std::min_element(tx.begin(), tx.end());
    double x1 = tx.empty() ? 1 : *std::max_element(tx.begin(), tx.end());
    double y0 = ys.empty() ? 0 : *std::min_element(ys.begin(), ys.end());
    double y1 = ys.empty() ? 1 : *std::max_element(ys.begin(), ys.end());
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
    s += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"15\">" + r.columns[yi] + " vs " + r.columns[0] + "</text>\n";
    // axes
    s += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(h - mb) + "\" x2=\"" +
         detail::svg_num(w - mr) + "\" y2=\"" + detail::svg_num(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" +
         detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // x ticks: decades when log, else 5 even steps
    if (logx) {
        for (long long d = (long long)std::floor(x0); d <= (long long)std::ceil(x1); ++d) {
            if (d < x0 - 1e-9 || d > x1 + 1e-9) continue;
            const double x = px(double(d));
            s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(h - mb) +
                 "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(h - mb + 6) +
                 "\" stroke=\"black\"/>\n";
            s += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(h - mb + 22) +
                 "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">1e" +
                 std::to_string(d) + "</text>\n";
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double xv = x0 + (x1 - x0) * i / 4.0;
            const double x = px(xv);
            s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(h - mb) +
                 "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(h - mb + 6) +
                 "\" stroke=\"black\"/>\n";
            s += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(h - mb + 22) +
                 "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
                 detail::svg_num(xv) + "</text>\n";
        }
    }
    for (int i = 0; i <= 4; ++i) {
        const double yv = y0 + (y1 - y0) * i / 4.0;
        const double y = py(yv);
        s += "<line x1=\"" + detail::svg_num(ml - 6) + "\" y1=\"" + detail::svg_num(y) + "\" x2=\"" +
             detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(y) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(ml - 10) + "\" y=\"" + detail::svg_num(y + 4) +
             "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">" +
             detail::svg_num(yv) + "</text>\n";
    }
    // series
    if (!xs.empty()) {
        std::string pts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) pts += " ";
            pts += detail::svg_num(px(tx[i])) + "," + detail::svg_num(py(ys[i]));
        }
        if (xs.size() > 1)
            s += "<polyline points=\"" + pts +
                 "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            s += "<circle cx=\"" + detail::svg_num(px(tx[i])) + "\" cy=\"" +
                 detail::svg_num(py(ys[i])) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace polyrep
