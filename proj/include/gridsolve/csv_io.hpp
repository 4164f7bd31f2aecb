#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gridsolve/errors.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/solvers.hpp"

namespace gridsolve {

namespace detail {

/// 17 significant digits: enough to reproduce any 64-bit value exactly.
inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace detail

/// Writes all snapshots of a trace: header `iteration,vertex,i,j,value`, one
/// row per (snapshot, vertex), ordered by (iteration, vertex).
inline void export_snapshots_csv(const SolveTrace& trace, const GridSpec& grid,
                                 const std::filesystem::path& path) {
    if (trace.snapshots.empty()) throw DomainError("export_snapshots_csv: empty trace");
    auto out = detail::open_for_write(path);
    out << "iteration,vertex,i,j,value\n";
    for (const auto& [iteration, values] : trace.snapshots) {
        for (int v = 0; v < grid.vertex_count(); ++v) {
            const auto [i, j] = vertex_coords(grid, v);
            out << iteration << ',' << v << ',' << i << ',' << j << ','
                << detail::csv_double(values[static_cast<size_t>(v)]) << '\n';
        }
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Writes the residual history: header `iteration,residual_l2`.
inline void export_residuals_csv(const SolveTrace& trace, const std::filesystem::path& path) {
    if (trace.residual_norms.empty()) throw DomainError("export_residuals_csv: empty trace");
    auto out = detail::open_for_write(path);
    out << "iteration,residual_l2\n";
    for (const auto& [iteration, r] : trace.residual_norms)
        out << iteration << ',' << detail::csv_double(r) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace gridsolve
