#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gridsolve/csv_io.hpp"
#include "gridsolve/errors.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/solvers.hpp"

namespace gridsolve {

enum class PlotFormat { Gnuplot, Svg };

namespace detail {

struct Bounds {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    /// Collapses empty or degenerate ranges to a unit span.
    void finalize() {
        if (lo > hi) { lo = 0.0; hi = 1.0; }
        if (hi - lo < 1e-12) hi = lo + 1.0;
    }
    double span() const { return hi - lo; }
};

// Oblique waterfall projection: snapshot rank s shifts a curve by
// (0.4 s, 0.25 s) in plot coordinates.
constexpr double kDepthShiftX = 0.4;
constexpr double kDepthShiftY = 0.25;

inline std::string color_ramp(double t) {
    // linear navy (#000080) -> yellow (#ffff00)
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 * t));
    const int g = static_cast<int>(std::lround(255.0 * t));
    const int b = static_cast<int>(std::lround(128.0 * (1.0 - t)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

/// Writes a 1D trace as a waterfall: each snapshot is one curve, offset along
/// an oblique depth axis by its snapshot rank. SVG curves are drawn
/// back-to-front.
inline void emit_waterfall(const SolveTrace& trace, const GridSpec& grid, PlotFormat format,
                           const std::filesystem::path& path) {
    if (grid.is_2d())
        throw DomainError("emit_waterfall handles 1D grids only; use emit_heatmaps for 2D");
    if (trace.snapshots.empty()) throw DomainError("emit_waterfall: empty trace");
    const int n = grid.vertex_count();

    if (format == PlotFormat::Gnuplot) {
        auto out = detail::open_for_write(path);
        out << "# waterfall of " << trace.snapshots.size() << " snapshots, solver "
            << to_string(trace.solver.algo) << "\n";
        out << "set title 'solution per iteration (" << to_string(trace.solver.algo)
            << ")'\nunset key\nset xlabel 'vertex + 0.4*rank'\nset ylabel 'value + 0.25*rank'\n";
        for (size_t s = 0; s < trace.snapshots.size(); ++s) {
            out << "$snap" << s << " << EOD\n";
            const auto& values = trace.snapshots[s].second;
            for (int v = 0; v < n; ++v)
                out << v << ' ' << detail::csv_double(values[static_cast<size_t>(v)]) << '\n';
            out << "EOD\n";
        }
        out << "plot ";
        for (size_t i = 0; i < trace.snapshots.size(); ++i) {
            const size_t s = trace.snapshots.size() - 1 - i;  // back to front
            if (i) out << ", \\\n     ";
            out << "$snap" << s << " using ($1+" << detail::csv_double(detail::kDepthShiftX * s)
                << "):($2+" << detail::csv_double(detail::kDepthShiftY * s)
                << ") with lines lc rgb 'blue'";
        }
        out << "\n";
        if (!out) throw IoError("write failed for '" + path.string() + "'");
        return;
    }

    detail::Bounds bx, by;
    for (size_t s = 0; s < trace.snapshots.size(); ++s) {
        const auto& values = trace.snapshots[s].second;
        for (int v = 0; v < n; ++v) {
            bx.include(v + detail::kDepthShiftX * s);
            by.include(values[static_cast<size_t>(v)] + detail::kDepthShiftY * s);
        }
    }
    bx.finalize();
    by.finalize();
    const double W = 960.0, H = 600.0, margin = 40.0;
    auto sx = [&](double x) { return margin + (x - bx.lo) / bx.span() * (W - 2 * margin); };
    auto sy = [&](double y) { return H - margin - (y - by.lo) / by.span() * (H - 2 * margin); };

    auto out = detail::open_for_write(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<!-- waterfall: " << trace.snapshots.size() << " snapshots, solver "
        << to_string(trace.solver.algo) << ", depth shift (0.4, 0.25) per rank -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 600\">\n";
    out << "<rect width=\"960\" height=\"600\" fill=\"white\"/>\n";
    for (size_t i = 0; i < trace.snapshots.size(); ++i) {
        const size_t s = trace.snapshots.size() - 1 - i;  // back to front
        const auto& values = trace.snapshots[s].second;
        out << "<polyline fill=\"none\" stroke=\"#3465a4\" stroke-width=\"1\" points=\"";
        for (int v = 0; v < n; ++v) {
            if (v) out << ' ';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f",
                          sx(v + detail::kDepthShiftX * s),
                          sy(values[static_cast<size_t>(v)] + detail::kDepthShiftY * s));
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Writes one heatmap file per snapshot of a 2D trace into `directory`,
/// named `<prefix>_iter<k>.<ext>`. Values map to colors through one linear
/// ramp between the global min and max over all snapshots; the ramp is
/// recorded in each file's header comment. Returns the written paths.
inline std::vector<std::filesystem::path> emit_heatmaps(const SolveTrace& trace,
                                                        const GridSpec& grid, PlotFormat format,
                                                        const std::filesystem::path& directory,
                                                        const std::string& prefix = "heatmap") {
    if (!grid.is_2d())
        throw DomainError("emit_heatmaps handles 2D grids only; use emit_waterfall for 1D");
    if (trace.snapshots.empty()) throw DomainError("emit_heatmaps: empty trace");
    const int n = grid.n;

    detail::Bounds range;
    for (const auto& [k, values] : trace.snapshots)
        for (double v : values) range.include(v);
    range.finalize();

    std::vector<std::filesystem::path> written;
    for (const auto& [iteration, values] : trace.snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_iter%05d.%s", prefix.c_str(), iteration,
                      format == PlotFormat::Gnuplot ? "gp" : "svg");
        const std::filesystem::path path = directory / name;
        auto out = detail::open_for_write(path);
        if (format == PlotFormat::Gnuplot) {
            out << "# heatmap iteration " << iteration << "; value ramp linear ["
                << detail::csv_double(range.lo) << ", " << detail::csv_double(range.hi)
                << "] over all snapshots\n";
            out << "set title 'iteration " << iteration << "'\nset view map\nset size ratio 1\n";
            out << "set cbrange [" << detail::csv_double(range.lo) << ":"
                << detail::csv_double(range.hi) << "]\n";
            out << "plot '-' matrix with image\n";
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    out << (j ? " " : "")
                        << detail::csv_double(values[static_cast<size_t>(n * i + j)]);
                out << '\n';
            }
            out << "e\n";
        } else {
            const int cell = 10;
            out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
            out << "<!-- heatmap iteration " << iteration << "; value ramp linear ["
                << detail::csv_double(range.lo) << ", " << detail::csv_double(range.hi)
                << "], color #000080 to #ffff00 -->\n";
            out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << n * cell << " "
                << n * cell << "\">\n";
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double v = values[static_cast<size_t>(n * i + j)];
                    const double t = std::isfinite(v) ? (v - range.lo) / range.span() : 0.0;
                    out << "<rect x=\"" << j * cell << "\" y=\"" << i * cell << "\" width=\""
                        << cell << "\" height=\"" << cell << "\" fill=\""
                        << detail::color_ramp(t) << "\"/>\n";
                }
            }
            out << "</svg>\n";
        }
        if (!out) throw IoError("write failed for '" + path.string() + "'");
        written.push_back(path);
    }
    return written;
}

}  // namespace gridsolve
