#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridsolve/assembly.hpp"
#include "gridsolve/config.hpp"
#include "gridsolve/csv_io.hpp"
#include "gridsolve/plots.hpp"
#include "gridsolve/solvers.hpp"
#include "gridsolve/spectral.hpp"

namespace gridsolve {

/// Files produced by one experiment run. Every path listed in the manifest
/// exists and is non-empty after a successful run.
struct TraceFileSet {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> snapshot_files;  // CSV and plot outputs
    std::filesystem::path residual_file;
};

/// Assembles the configured system, runs the solver, and writes the
/// requested outputs plus a manifest.json. The output directory comes from
/// the config unless overridden; it must be writable before any solver work
/// starts.
inline TraceFileSet run_experiment(const ExperimentConfig& config,
                                   const std::optional<std::string>& out_override = {},
                                   const std::vector<OutputFormat>& formats_override = {}) {
    ExperimentConfig cfg = config;
    if (out_override) cfg.output_directory = *out_override;
    if (!formats_override.empty()) cfg.formats = formats_override;
    if (cfg.output_directory.empty())
        throw ConfigError("no output directory: set [output] directory or pass --out");

    const std::filesystem::path dir = cfg.output_directory;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    {
        const auto probe = dir / ".write_probe";
        std::ofstream test(probe, std::ios::trunc);
        if (!test) throw IoError("output directory '" + dir.string() + "' is not writable");
        test.close();
        std::filesystem::remove(probe, ec);
    }

    const ConstraintSet constraints{cfg.constraints};
    const LeastSquaresSystem sys = (cfg.energy == EnergyKind::Gradient)
                                       ? assemble_gradient(cfg.grid, constraints)
                                       : assemble_laplacian(cfg.grid, constraints);
    const NormalSystem normal = normal_equations(sys);
    const SolveTrace trace = solve(normal, cfg.solver, cfg.run);

    auto wants = [&](OutputFormat f) {
        return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end();
    };

    TraceFileSet files;
    nlohmann::json file_list = nlohmann::json::object();
    if (wants(OutputFormat::Csv)) {
        const auto snapshots_path = dir / "snapshots.csv";
        export_snapshots_csv(trace, cfg.grid, snapshots_path);
        files.snapshot_files.push_back(snapshots_path);
        file_list["snapshots_csv"] = snapshots_path.filename().string();

        files.residual_file = dir / "residuals.csv";
        export_residuals_csv(trace, files.residual_file);
        file_list["residuals_csv"] = files.residual_file.filename().string();
    }
    nlohmann::json plot_names = nlohmann::json::array();
    for (PlotFormat pf : {PlotFormat::Gnuplot, PlotFormat::Svg}) {
        const bool requested = (pf == PlotFormat::Gnuplot) ? wants(OutputFormat::Gnuplot)
                                                           : wants(OutputFormat::Svg);
        if (!requested) continue;
        if (cfg.grid.is_2d()) {
            for (const auto& p : emit_heatmaps(trace, cfg.grid, pf, dir)) {
                files.snapshot_files.push_back(p);
                plot_names.push_back(p.filename().string());
            }
        } else {
            const auto p = dir / (pf == PlotFormat::Gnuplot ? "waterfall.gp" : "waterfall.svg");
            emit_waterfall(trace, cfg.grid, pf, p);
            files.snapshot_files.push_back(p);
            plot_names.push_back(p.filename().string());
        }
    }
    file_list["plots"] = plot_names;

    nlohmann::json manifest;
    manifest["config_echo"] = render_config(cfg);
    manifest["grid"] = {{"dim", cfg.grid.is_2d() ? 2 : 1}, {"n", cfg.grid.n}};
    manifest["energy"] = to_string(cfg.energy);
    manifest["solver"] = to_string(cfg.solver.algo);
    manifest["iterations_run"] = trace.iterations_run;
    if (trace.converged_at)
        manifest["converged_at"] = *trace.converged_at;
    else
        manifest["converged_at"] = nullptr;
    manifest["breakdown"] = trace.breakdown;
    manifest["diverged"] = trace.diverged;
    manifest["final_residual"] = trace.residual_norms.back().second;
    manifest["snapshot_count"] = trace.snapshots.size();
    manifest["warnings"] = nlohmann::json::array();
    for (const auto& w : sys.warnings) manifest["warnings"].push_back(w);

    const int N = cfg.grid.vertex_count();
    if (N <= 100 || cfg.force_condition) {
        const SpectrumSummary s = condition_number(densify(normal.M));
        manifest["condition"] = {{"lambda_max", s.lambda_max},
                                 {"lambda_min_nonzero", s.lambda_min_nonzero},
                                 {"condition_number", s.condition_number},
                                 {"near_null_dimension", s.near_null_dimension}};
    } else {
        manifest["condition"] = nullptr;
    }
    manifest["files"] = file_list;

    files.manifest = dir / "manifest.json";
    {
        auto out = detail::open_for_write(files.manifest);
        out << manifest.dump(2) << "\n";
        if (!out) throw IoError("write failed for '" + files.manifest.string() + "'");
    }
    return files;
}

}  // namespace gridsolve
