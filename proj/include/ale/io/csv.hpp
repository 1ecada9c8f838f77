#pragma once
// CSV emission/ingestion for run artifacts. All floating-point fields are
// written with %.17g so that a replayed run can be compared byte-for-byte
// and a parsed value round-trips to the identical double.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ale/cluster.hpp"
#include "ale/diagnostics.hpp"
#include "ale/spectral.hpp"

namespace ale {

inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {
inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}
} // namespace detail

// ---- angles.csv: the full attachment history, sufficient for exact replay

inline void write_angles_csv(const std::string& path, const ClusterState& state) {
    std::ofstream out = detail::open_out(path);
    out << "j,theta,c_j\n";
    for (std::size_t j = 0; j < state.n(); ++j)
        out << j << ',' << g17(state.history[j].theta) << ',' << g17(state.history[j].map.c)
            << '\n';
}

struct AngleRow {
    double theta = 0.0;
    double cap = 0.0;
};

inline std::vector<AngleRow> read_angles_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("j,theta,c_j", 0) != 0)
        throw std::runtime_error("bad angles.csv header in " + path);
    std::vector<AngleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 3) throw std::runtime_error("bad angles.csv row in " + path);
        rows.push_back({std::stod(f[1]), std::stod(f[2])});
    }
    return rows;
}

// rebuild a cluster from a recorded history (rng state is not restored; the
// rebuilt state is for evaluation, not for continuing the chain)
inline ClusterState state_from_history(const ModelParams& params,
                                       const std::vector<AngleRow>& rows) {
    ClusterState state(params, 0);
    for (const auto& row : rows) state.append(row.theta, row.cap);
    return state;
}

// ---- deviation.csv

inline void write_deviation_csv(const std::string& path,
                                const std::vector<DeviationRecord>& records) {
    std::ofstream out = detail::open_out(path);
    out << "t,r,sup_dev,norm2_dev\n";
    for (const auto& rec : records)
        out << g17(rec.t) << ',' << g17(rec.r) << ',' << g17(rec.sup_dev) << ','
            << g17(rec.norm2_dev) << '\n';
}

// ---- coeffs.csv: Laurent modes of the fluctuation field per snapshot

inline void write_coeffs_csv(const std::string& path, const CoefficientProcess& cp) {
    std::ofstream out = detail::open_out(path);
    out << "t,k,re,im\n";
    for (std::size_t i = 0; i < cp.times.size(); ++i)
        for (int k = 0; k < cp.snapshots[i].order(); ++k)
            out << g17(cp.times[i]) << ',' << k << ',' << g17(cp.snapshots[i].coeffs[k].real())
                << ',' << g17(cp.snapshots[i].coeffs[k].imag()) << '\n';
}

inline CoefficientProcess read_coeffs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,k,re,im", 0) != 0)
        throw std::runtime_error("bad coeffs.csv header in " + path);
    CoefficientProcess cp;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("bad coeffs.csv row in " + path);
        const double t = std::stod(f[0]);
        const int k = std::stoi(f[1]);
        if (cp.times.empty() || cp.times.back() != t) {
            cp.times.push_back(t);
            cp.snapshots.emplace_back();
        }
        auto& series = cp.snapshots.back();
        if (static_cast<int>(series.coeffs.size()) != k)
            throw std::runtime_error("coeffs.csv: non-contiguous k index in " + path);
        series.coeffs.emplace_back(std::stod(f[2]), std::stod(f[3]));
    }
    return cp;
}

} // namespace ale
