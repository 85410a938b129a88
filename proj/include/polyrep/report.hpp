#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyrep/errors.hpp"

namespace polyrep {

/// Rectangular numeric result table. All cells are doubles; integer-valued
/// columns (N, H, ...) stay exact up to 2^53, and the CSV writer prints 17
/// significant digits so every double round-trips.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> r) {
        if (r.size() != columns.size())
            throw precondition_error("Report: row width " + std::to_string(r.size()) +
                                     " != column count " + std::to_string(columns.size()));
        rows.push_back(std::move(r));
    }
};

inline std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(const Report& r, std::ostream& os) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i) os << ',';
        os << r.columns[i];
    }
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_cell(row[i]);
        }
        os << '\n';
    }
}

inline void write_csv_file(const Report& r, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw precondition_error("write_csv: cannot open " + path);
    write_csv(r, f);
    if (!f) throw precondition_error("write_csv: write failed for " + path);
}

inline void write_json(const Report& r, std::ostream& os) {
    nlohmann::json j;
    j["columns"] = r.columns;
    j["rows"] = r.rows;
    os << j.dump(2) << '\n';
}

inline void write_json_file(const Report& r, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw precondition_error("write_json: cannot open " + path);
    write_json(r, f);
}

inline Report read_csv(std::istream& is) {
    Report r;
    std::string line;
    if (!std::getline(is, line)) return r;
    std::istringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) r.columns.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw precondition_error("read_csv: bad cell '" + cell + "'");
            }
        }
        r.add_row(std::move(row));
    }
    return r;
}

inline Report read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw precondition_error("read_csv: cannot open " + path);
    return read_csv(f);
}

} // namespace polyrep
