#pragma once
// Boundary rendering: level lines theta -> Phi_n(rho e^{i theta}) written as
// SVG polylines, one per snapshot, colored along a cold-to-warm ramp by
// snapshot index. Rendering happens slightly off the unit circle (the slit
// family is not smooth on it); the caller picks rho.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ale/cluster.hpp"

namespace ale {

inline std::vector<cplx> level_line(const ClusterState& state, std::size_t n_steps,
                                    double rho, std::size_t M) {
    std::vector<cplx> pts(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double th = 6.28318530717958647692 * m / static_cast<double>(M);
        pts[m] = phi_eval(state, rho * cplx(std::cos(th), std::sin(th)), n_steps);
    }
    return pts;
}

// total turning of the closed polyline, in radians; a simple closed curve
// traversed once gives +-2 pi
inline double polyline_total_turning(const std::vector<cplx>& pts) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx e1 = pts[(i + 1) % n] - pts[i];
        const cplx e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
        total += std::arg(e2 * std::conj(e1));
    }
    return total;
}

namespace detail {
inline std::string ramp_color(double s) {
    // blue (early) to red (late)
    const int r = static_cast<int>(40 + 200 * s);
    const int g = 60;
    const int b = static_cast<int>(240 - 200 * s);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}
} // namespace detail

inline void write_boundary_svg(const std::string& path,
                               const std::vector<std::vector<cplx>>& curves,
                               int canvas = 800) {
    if (curves.empty()) throw std::invalid_argument("write_boundary_svg: no curves");
    double extent = 1e-9;
    for (const auto& c : curves)
        for (const cplx& p : c) extent = std::max({extent, std::abs(p.real()), std::abs(p.imag())});
    const double scale = 0.46 * canvas / extent;
    const double mid = canvas / 2.0;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas << "\" height=\""
        << canvas << "\" viewBox=\"0 0 " << canvas << ' ' << canvas << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const double s = curves.size() == 1 ? 1.0 : double(ci) / double(curves.size() - 1);
        out << "<polygon fill=\"none\" stroke=\"" << detail::ramp_color(s)
            << "\" stroke-width=\"1\" points=\"";
        for (const cplx& p : curves[ci]) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", mid + scale * p.real(),
                          mid - scale * p.imag());
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace ale
