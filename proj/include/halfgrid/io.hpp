#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "halfgrid/grid.hpp"

namespace halfgrid {

inline constexpr const char* kConventionTag = "halfgrid-v1";
inline constexpr const char* kToolVersion = "gsp 0.1.0";

namespace io {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw input_error("malformed number '" + s + "' in " + context);
    return v;
}

/// Rows of doubles from a CSV file with one header line.
inline std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path,
                                                      size_t columns) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw input_error("empty file " + path.string());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != columns)
            throw input_error("expected " + std::to_string(columns) + " columns in " +
                              path.string());
        std::vector<double> row(columns);
        for (size_t i = 0; i < columns; ++i) row[i] = parse_double(cells[i], path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error("no data rows in " + path.string());
    return rows;
}

inline void write_lines(const std::filesystem::path& path, const std::string& header,
                        const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path.string());
    out << header << "\n";
    for (const auto& l : lines) out << l << "\n";
}

// --- signals: x,re,im ------------------------------------------------------

inline void write_signal(const std::filesystem::path& path, const Signal& f) {
    std::vector<std::string> lines;
    lines.reserve(f.grid.n);
    for (int a = 0; a < f.grid.n; ++a)
        lines.push_back(fmt17(f.grid.point(a)) + "," + fmt17(f.values[a].real()) + "," +
                        fmt17(f.values[a].imag()));
    write_lines(path, "x,re,im", lines);
}

/// Recover the uniform grid from a coordinate column.
inline Grid1D grid_from_points(const std::vector<double>& x, const std::string& context) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || n % 2 != 0) throw input_error(context + ": need an even point count >= 2");
    const double dx = x[1] - x[0];
    if (!(dx > 0)) throw input_error(context + ": points must increase");
    for (int a = 1; a < n; ++a)
        if (std::abs(x[a] - x[0] - a * dx) > 1e-9 * std::max(1.0, std::abs(dx * n)))
            throw input_error(context + ": points are not uniformly spaced");
    return Grid1D{n, dx, x[0]};
}

inline Signal read_signal(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path, 3);
    std::vector<double> x;
    std::vector<cplx> v;
    for (const auto& r : rows) {
        x.push_back(r[0]);
        v.emplace_back(r[1], r[2]);
    }
    return make_signal(grid_from_points(x, path.string()), std::move(v));
}

// --- kernels: xa,xb,re,im (row-major) --------------------------------------

inline void write_kernel(const std::filesystem::path& path, const Kernel& K) {
    std::vector<std::string> lines;
    lines.reserve(static_cast<size_t>(K.grid.n) * K.grid.n);
    for (int a = 0; a < K.grid.n; ++a)
        for (int b = 0; b < K.grid.n; ++b)
            lines.push_back(fmt17(K.grid.point(a)) + "," + fmt17(K.grid.point(b)) + "," +
                            fmt17(K.values(a, b).real()) + "," + fmt17(K.values(a, b).imag()));
    write_lines(path, "xa,xb,re,im", lines);
}

inline Kernel read_kernel(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path, 4);
    const size_t total = rows.size();
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
    if (static_cast<size_t>(n) * n != total)
        throw input_error(path.string() + ": kernel row count is not a square");
    std::vector<double> x;
    for (int a = 0; a < n; ++a) x.push_back(rows[static_cast<size_t>(a) * n][0]);
    const Grid1D g = grid_from_points(x, path.string());
    MatrixXcd K(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const auto& r = rows[static_cast<size_t>(a) * n + b];
            K(a, b) = cplx(r[2], r[3]);
        }
    return make_kernel(g, std::move(K));
}

// --- phase fields: x,xi,re,im (s outer, k inner) ----------------------------

inline void write_phase_field(const std::filesystem::path& path, const PhaseField& F) {
    const PhaseGrid& pg = F.pgrid;
    std::vector<std::string> lines;
    lines.reserve(static_cast<size_t>(pg.s_count()) * pg.xi_count());
    for (int s = 0; s < pg.s_count(); ++s)
        for (int k = 0; k < pg.xi_count(); ++k)
            lines.push_back(fmt17(pg.x(s)) + "," + fmt17(pg.xi(k)) + "," +
                            fmt17(F.values(s, k).real()) + "," + fmt17(F.values(s, k).imag()));
    write_lines(path, "x,xi,re,im", lines);
}

inline PhaseField read_phase_field(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path, 4);
    // infer: count of distinct xi values per x block
    size_t kcount = 1;
    while (kcount < rows.size() && rows[kcount][0] == rows[0][0]) ++kcount;
    if (kcount < 2 || rows.size() % kcount != 0)
        throw input_error(path.string() + ": malformed phase-field layout");
    const int n = static_cast<int>(kcount);
    const int scount = static_cast<int>(rows.size() / kcount);
    if (scount != 2 * n - 1)
        throw input_error(path.string() + ": phase field must have (2n-1) x n shape");
    const double half = rows[kcount][0] - rows[0][0];
    if (!(half > 0)) throw input_error(path.string() + ": x axis must increase");
    const Grid1D g = make_grid(n, 2.0 * half, rows[0][0]);
    const PhaseGrid pg = make_phase_grid(g);
    for (int k = 0; k < n; ++k)
        if (std::abs(rows[k][1] - pg.xi(k)) > 1e-9 * std::max(1.0, pg.dxi() * n))
            throw input_error(path.string() + ": xi axis does not match the half-grid lattice");
    MatrixXcd v(pg.s_count(), n);
    for (int s = 0; s < pg.s_count(); ++s)
        for (int k = 0; k < n; ++k) {
            const auto& r = rows[static_cast<size_t>(s) * n + k];
            v(s, k) = cplx(r[2], r[3]);
        }
    return make_phase_field(pg, std::move(v));
}

// --- 4-axis tensors: a1,a2,a3,a4,re,im (indices; axis metadata in manifest) -

inline void write_tensor4(const std::filesystem::path& path, const Tensor4& T) {
    std::vector<std::string> lines;
    lines.reserve(T.size());
    for (int i0 = 0; i0 < T.shape[0]; ++i0)
        for (int i1 = 0; i1 < T.shape[1]; ++i1)
            for (int i2 = 0; i2 < T.shape[2]; ++i2)
                for (int i3 = 0; i3 < T.shape[3]; ++i3) {
                    const cplx& z = T.at(i0, i1, i2, i3);
                    lines.push_back(std::to_string(i0) + "," + std::to_string(i1) + "," +
                                    std::to_string(i2) + "," + std::to_string(i3) + "," +
                                    fmt17(z.real()) + "," + fmt17(z.imag()));
                }
    write_lines(path, "a1,a2,a3,a4,re,im", lines);
}

inline Tensor4 read_tensor4(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path, 6);
    std::array<int, 4> shape{0, 0, 0, 0};
    for (const auto& r : rows)
        for (int d = 0; d < 4; ++d)
            shape[d] = std::max(shape[d], static_cast<int>(std::lround(r[d])) + 1);
    Tensor4 T(shape);
    if (rows.size() != T.size())
        throw input_error(path.string() + ": tensor rows do not fill the index box");
    for (const auto& r : rows)
        T.at(static_cast<int>(std::lround(r[0])), static_cast<int>(std::lround(r[1])),
             static_cast<int>(std::lround(r[2])), static_cast<int>(std::lround(r[3]))) =
            cplx(r[4], r[5]);
    return T;
}

// --- run manifest ------------------------------------------------------------

struct RunManifest {
    std::string convention = kConventionTag;
    Grid1D grid;
    ordered_json model;  // descriptor: {"kind": ..., parameters...}
    uint64_t seed = 0;
    long samples = 0;
    std::string command_line;
    std::string tool_version = kToolVersion;

    ordered_json to_json() const {
        const PhaseGrid pg{grid};
        ordered_json j;
        j["convention"] = convention;
        j["grid"] = {{"n", grid.n}, {"dx", grid.dx},   {"x0", grid.x0},
                     {"nxi", pg.xi_count()}, {"dxi", pg.dxi()}};
        j["model"] = model;
        j["seed"] = seed;
        j["samples"] = samples;
        j["command"] = command_line;
        j["tool_version"] = tool_version;
        return j;
    }
};

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw input_error("cannot write manifest in " + dir.string());
    out << m.to_json().dump(2) << "\n";
}

}  // namespace io
}  // namespace halfgrid
