#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridsolve/gridsolve.hpp"
#include "gridsolve/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitSolverError = 2;
constexpr int kExitIoError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gridsolve::IoError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

gridsolve::ExperimentConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return gridsolve::parse_config(text);
    } catch (const gridsolve::ConfigError& e) {
        throw gridsolve::ConfigError(std::string(path) + ": " + e.what());
    }
}

int run_command(const std::string& config_path, const std::optional<std::string>& out_dir,
                const std::vector<std::string>& format_names) {
    const gridsolve::ExperimentConfig cfg = load_config(config_path);
    std::vector<gridsolve::OutputFormat> formats;
    for (const auto& f : format_names) {
        if (f == "csv") formats.push_back(gridsolve::OutputFormat::Csv);
        else if (f == "gnuplot") formats.push_back(gridsolve::OutputFormat::Gnuplot);
        else if (f == "svg") formats.push_back(gridsolve::OutputFormat::Svg);
        else throw gridsolve::ConfigError("--format must be csv, gnuplot or svg, got '" + f + "'");
    }
    const gridsolve::TraceFileSet files = gridsolve::run_experiment(cfg, out_dir, formats);
    std::cout << "wrote " << files.manifest.string() << "\n";
    return kExitOk;
}

int condition_command(const std::string& config_path) {
    const gridsolve::ExperimentConfig cfg = load_config(config_path);
    const int N = cfg.grid.vertex_count();
    if (N > 2500)
        throw gridsolve::DomainError("condition: refusing N = " + std::to_string(N) +
                                     " (supported up to 2500)");
    if (N > 100)
        std::cerr << "note: full eigendecomposition of a " << N << "x" << N
                  << " matrix; this can take minutes\n";
    const gridsolve::ConstraintSet cons{cfg.constraints};
    const gridsolve::LeastSquaresSystem sys =
        (cfg.energy == gridsolve::EnergyKind::Gradient)
            ? gridsolve::assemble_gradient(cfg.grid, cons)
            : gridsolve::assemble_laplacian(cfg.grid, cons);
    for (const auto& w : sys.warnings) std::cerr << "warning: " << w << "\n";
    const gridsolve::NormalSystem normal = gridsolve::normal_equations(sys);
    const gridsolve::SpectrumSummary s =
        gridsolve::condition_number(gridsolve::densify(normal.M));
    std::printf("lambda_max          %.12g\n", s.lambda_max);
    std::printf("lambda_min_nonzero  %.12g\n", s.lambda_min_nonzero);
    std::printf("condition_number    %.12g\n", s.condition_number);
    std::printf("near_null_dimension %d\n", s.near_null_dimension);
    return kExitOk;
}

int verify_command(const std::string& experiments_dir, const std::string& work_dir) {
    gridsolve::verify::AcceptanceOptions opt;
    opt.experiments_dir = experiments_dir;
    opt.work_dir = work_dir.empty()
                       ? std::filesystem::temp_directory_path() / "gridsolve_verify"
                       : std::filesystem::path(work_dir);
    std::filesystem::create_directories(opt.work_dir);
    const auto results = gridsolve::verify::run_acceptance(opt);
    bool all_passed = true;
    for (const auto& r : results) {
        std::printf("[%s] %2d  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
        if (!r.detail.empty()) std::printf("          %s\n", r.detail.c_str());
        all_passed = all_passed && r.passed;
    }
    std::printf("%zu/%zu checks passed\n",
                static_cast<size_t>(std::count_if(results.begin(), results.end(),
                                                  [](const auto& r) { return r.passed; })),
                results.size());
    return all_passed ? kExitOk : kExitSolverError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid least-squares energies and iterative solvers"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::vector<std::string> formats;
    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", config_path, "path to a .ini experiment config")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--format", formats, "output formats (overrides the config)")
        ->check(CLI::IsMember({"csv", "gnuplot", "svg"}));

    std::string cond_config;
    auto* cond = app.add_subcommand("condition", "print the spectrum summary of a config's "
                                                 "normal matrix");
    cond->add_option("config", cond_config, "path to a .ini experiment config")->required();

    std::string experiments_dir = "experiments";
    std::string work_dir;
    auto* verify = app.add_subcommand("verify", "run the built-in verification checks and "
                                                "print a pass/fail table");
    verify->add_option("--experiments", experiments_dir,
                       "directory holding the shipped experiment configs");
    verify->add_option("--work", work_dir, "scratch directory for verification outputs");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return run_command(config_path, out_dir, formats);
        if (cond->parsed()) return condition_command(cond_config);
        if (verify->parsed()) return verify_command(experiments_dir, work_dir);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    } catch (const gridsolve::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const gridsolve::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const gridsolve::DomainError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverError;
    }
    return kExitOk;
}
