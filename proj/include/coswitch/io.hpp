#pragma once

// File exports and their re-readers: sweep CSV maps and Touchstone v1
// four-port files. Formatting is pinned to 9 significant digits so identical
// runs produce byte-identical files.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coswitch/errors.hpp"
#include "coswitch/network.hpp"
#include "coswitch/sweep.hpp"

namespace coswitch {

inline std::string format_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw SchemaError("missing CSV column '" + name + "'");
    }
};

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string field;
        std::istringstream ss(s);
        while (std::getline(ss, field, ',')) out.push_back(field);
        if (!s.empty() && s.back() == ',') out.push_back("");
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            table.header = split(line);
            first = false;
        } else {
            auto row = split(line);
            if (row.size() != table.header.size())
                throw SchemaError("CSV row " + std::to_string(table.rows.size() + 2) + " has " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(table.header.size()));
            table.rows.push_back(std::move(row));
        }
    }
    if (first) throw SchemaError("CSV has no header row");
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_csv(in);
}

inline double csv_double(const std::string& field, const std::string& col, std::size_t row) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        throw SchemaError("CSV column '" + col + "' row " + std::to_string(row) +
                          ": not a number: '" + field + "'");
    }
    if (pos != field.size())
        throw SchemaError("CSV column '" + col + "' row " + std::to_string(row) +
                          ": trailing junk: '" + field + "'");
    return v;
}

inline const std::vector<std::string>& sweep_csv_header() {
    static const std::vector<std::string> h{"f_Hz",     "flux",          "S21_dB",
                                            "S31_dB",   "S11_dB",        "S41_dB",
                                            "argS21_deg", "argS31_deg",  "isolation_dB"};
    return h;
}

// Frequency-major row order; singular points are skipped.
inline void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
    const auto& header = sweep_csv_header();
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    const auto iso = isolation_ratio(grid);
    for (std::size_t fi = 0; fi < grid.frequencies.size(); ++fi) {
        for (std::size_t pj = 0; pj < grid.fluxes.size(); ++pj) {
            const auto& cell = grid.at(fi, pj);
            if (!cell) continue;
            auto db = [](const complexd& s) {
                return 20.0 * std::log10(std::max(std::abs(s), 1e-300));
            };
            auto deg = [](const complexd& s) { return std::arg(s) * 180.0 / pi; };
            out << format_sig9(grid.frequencies[fi]) << ',' << format_sig9(grid.fluxes[pj]) << ','
                << format_sig9(db(cell->s(1, 0))) << ',' << format_sig9(db(cell->s(2, 0))) << ','
                << format_sig9(db(cell->s(0, 0))) << ',' << format_sig9(db(cell->s(3, 0))) << ','
                << format_sig9(deg(cell->s(1, 0))) << ',' << format_sig9(deg(cell->s(2, 0))) << ','
                << format_sig9(*iso[grid.index(fi, pj)]) << '\n';
        }
    }
}

// Rebuild a magnitude grid from a sweep CSV (for the `points` command).
inline MagnitudeGrid magnitude_grid_from_csv(const CsvTable& table) {
    const int cf = table.column("f_Hz");
    const int cphi = table.column("flux");
    const int c21 = table.column("S21_dB");
    const int c31 = table.column("S31_dB");
    std::vector<double> freqs, fluxes;
    std::map<std::pair<double, double>, std::pair<double, double>> values;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const double f = csv_double(row[cf], "f_Hz", r);
        const double phi = csv_double(row[cphi], "flux", r);
        if (freqs.empty() || f > freqs.back()) freqs.push_back(f);
        if (fluxes.empty() || std::find(fluxes.begin(), fluxes.end(), phi) == fluxes.end())
            fluxes.push_back(phi);
        values[{f, phi}] = {csv_double(row[c21], "S21_dB", r), csv_double(row[c31], "S31_dB", r)};
    }
    MagnitudeGrid grid;
    grid.frequencies = freqs;
    grid.fluxes = fluxes;
    grid.s21_db.resize(freqs.size() * fluxes.size());
    grid.s31_db.resize(freqs.size() * fluxes.size());
    for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
        for (std::size_t pi = 0; pi < fluxes.size(); ++pi) {
            auto it = values.find({freqs[fi], fluxes[pi]});
            if (it == values.end()) continue;  // hole
            grid.s21_db[grid.index(fi, pi)] = it->second.first;
            grid.s31_db[grid.index(fi, pi)] = it->second.second;
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Touchstone v1, 4-port

enum class TouchstoneFormat { MagnitudeAngle, RealImaginary };

inline void write_touchstone_s4p(std::ostream& out, const std::vector<double>& frequencies,
                                 const std::vector<FourPortSMatrix>& matrices, double z0,
                                 TouchstoneFormat format = TouchstoneFormat::MagnitudeAngle) {
    if (frequencies.size() != matrices.size())
        throw SchemaError("write_touchstone_s4p: axis/matrix length mismatch");
    out << "# GHZ S " << (format == TouchstoneFormat::MagnitudeAngle ? "MA" : "RI") << " R "
        << format_sig9(z0) << "\n";
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        for (int row = 0; row < 4; ++row) {
            std::string line = row == 0 ? format_sig9(frequencies[i] / 1e9) : "";
            for (int col = 0; col < 4; ++col) {
                const complexd s = matrices[i].s(row, col);
                if (format == TouchstoneFormat::MagnitudeAngle) {
                    line += " " + format_sig9(std::abs(s)) + " " +
                            format_sig9(std::arg(s) * 180.0 / pi);
                } else {
                    line += " " + format_sig9(s.real()) + " " + format_sig9(s.imag());
                }
            }
            out << line << "\n";
        }
    }
}

struct TouchstoneData {
    std::vector<double> frequencies;  // Hz
    std::vector<Matrix4c> matrices;
    double z0 = 50.0;
    TouchstoneFormat format = TouchstoneFormat::MagnitudeAngle;
};

inline TouchstoneData read_touchstone_s4p(std::istream& in) {
    TouchstoneData data;
    std::string line;
    bool have_option = false;
    std::vector<double> numbers;
    while (std::getline(in, line)) {
        const auto bang = line.find('!');
        if (bang != std::string::npos) line = line.substr(0, bang);
        std::istringstream ss(line);
        std::string tok;
        if (!have_option) {
            if (!(ss >> tok)) continue;
            if (tok != "#") throw SchemaError("touchstone: expected option line first");
            std::string unit, type, fmt, r;
            double z0;
            if (!(ss >> unit >> type >> fmt >> r >> z0) || unit != "GHZ" || type != "S" || r != "R")
                throw SchemaError("touchstone: unsupported option line");
            if (fmt == "MA")
                data.format = TouchstoneFormat::MagnitudeAngle;
            else if (fmt == "RI")
                data.format = TouchstoneFormat::RealImaginary;
            else
                throw SchemaError("touchstone: unsupported format " + fmt);
            data.z0 = z0;
            have_option = true;
            continue;
        }
        double v;
        while (ss >> v) numbers.push_back(v);
    }
    if (numbers.size() % 33 != 0) throw SchemaError("touchstone: truncated 4-port record");
    for (std::size_t i = 0; i < numbers.size(); i += 33) {
        data.frequencies.push_back(numbers[i] * 1e9);
        Matrix4c m;
        for (int row = 0; row < 4; ++row) {
            for (int col = 0; col < 4; ++col) {
                const double a = numbers[i + 1 + 2 * (row * 4 + col)];
                const double b = numbers[i + 2 + 2 * (row * 4 + col)];
                m(row, col) = data.format == TouchstoneFormat::MagnitudeAngle
                                  ? std::polar(a, b * pi / 180.0)
                                  : complexd(a, b);
            }
        }
        data.matrices.push_back(m);
    }
    return data;
}

}  // namespace coswitch
