#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridsolve/assembly.hpp"
#include "gridsolve/errors.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/solvers.hpp"

namespace gridsolve {

enum class OutputFormat { Csv, Gnuplot, Svg };

inline const char* to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Gnuplot: return "gnuplot";
        case OutputFormat::Svg: return "svg";
    }
    return "?";
}

/// Declarative description of one experiment run, parsed from a flat
/// INI-style document with sections [grid], [energy], [solver],
/// [constraints], [run], [output].
struct ExperimentConfig {
    GridSpec grid{GridDim::OneD, 3};
    EnergyKind energy = EnergyKind::Gradient;
    SolverKind solver{};
    std::vector<Constraint> constraints;
    RunSettings run{};
    std::vector<OutputFormat> formats;
    std::string output_directory;
    bool force_condition = false;

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline int parse_int(std::string_view s, int line, const std::string& key) {
    int value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError(line, "key '" + key + "': expected an integer, got '" +
                                    std::string(s) + "'");
    return value;
}

inline double parse_double(std::string_view s, int line, const std::string& key) {
    std::string buf(s);
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw ConfigError(line, "key '" + key + "': expected a number, got '" + buf + "'");
    return value;
}

inline bool parse_bool(std::string_view s, int line, const std::string& key) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(line, "key '" + key + "': expected true or false, got '" +
                                std::string(s) + "'");
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parses and fully validates a config document. Defaults: tolerance 1e-10,
/// snapshot stride 1, omega 1.5, zero initial guess; an empty [constraints]
/// section on a 2D grid gets the default placement (two opposite corners at
/// 0 and the center at 1).
inline ExperimentConfig parse_config(const std::string& text) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;

    std::optional<int> grid_dim, grid_n;
    std::optional<std::string> energy_kind, solver_kind;
    std::optional<double> omega, tolerance;
    std::optional<int> max_iterations, snapshot_stride;
    std::optional<std::vector<int>> snapshot_iterations;
    std::vector<double> initial_guess;
    struct RawConstraint {
        std::vector<std::string> fields;
        int line;
    };
    std::vector<RawConstraint> raw_constraints;
    std::vector<OutputFormat> formats;
    std::string directory;
    bool force_condition = false;

    std::set<std::string> sections_seen;
    std::string section;
    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = detail::trim(raw_line);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "malformed section header '" + std::string(line) + "'");
            section = std::string(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "energy" && section != "solver" &&
                section != "constraints" && section != "run" && section != "output")
                throw ConfigError(line_no, "unknown section [" + section + "]");
            sections_seen.insert(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string value{detail::trim(line.substr(eq + 1))};
        if (section.empty())
            throw ConfigError(line_no, "key '" + key + "' before any section header");

        if (section == "grid") {
            if (key == "dim") grid_dim = parse_int(value, line_no, key);
            else if (key == "n") grid_n = parse_int(value, line_no, key);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [grid]");
        } else if (section == "energy") {
            if (key == "kind") energy_kind = value;
            else throw ConfigError(line_no, "unknown key '" + key + "' in [energy]");
        } else if (section == "solver") {
            if (key == "kind") solver_kind = value;
            else if (key == "omega") omega = parse_double(value, line_no, key);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [solver]");
        } else if (section == "constraints") {
            if (key == "constraint")
                raw_constraints.push_back({detail::split_ws(value), line_no});
            else throw ConfigError(line_no, "unknown key '" + key + "' in [constraints]");
        } else if (section == "run") {
            if (key == "max_iterations") max_iterations = parse_int(value, line_no, key);
            else if (key == "tolerance") tolerance = parse_double(value, line_no, key);
            else if (key == "snapshot_stride") snapshot_stride = parse_int(value, line_no, key);
            else if (key == "snapshot_iterations") {
                std::vector<int> list;
                for (const auto& tok : detail::split_ws(value))
                    list.push_back(parse_int(tok, line_no, key));
                if (list.empty())
                    throw ConfigError(line_no, "key 'snapshot_iterations': empty list");
                for (size_t i = 0; i + 1 < list.size(); ++i)
                    if (list[i] >= list[i + 1])
                        throw ConfigError(line_no,
                                          "key 'snapshot_iterations': list must be strictly "
                                          "increasing");
                if (list.front() < 0)
                    throw ConfigError(line_no, "key 'snapshot_iterations': negative iteration");
                snapshot_iterations = std::move(list);
            } else if (key == "initial_guess") {
                for (const auto& tok : detail::split_ws(value))
                    initial_guess.push_back(parse_double(tok, line_no, key));
            } else throw ConfigError(line_no, "unknown key '" + key + "' in [run]");
        } else if (section == "output") {
            if (key == "directory") directory = value;
            else if (key == "formats") {
                for (const auto& tok : detail::split_ws(value)) {
                    OutputFormat f;
                    if (tok == "csv") f = OutputFormat::Csv;
                    else if (tok == "gnuplot") f = OutputFormat::Gnuplot;
                    else if (tok == "svg") f = OutputFormat::Svg;
                    else
                        throw ConfigError(line_no, "key 'formats': unknown format '" + tok +
                                                       "' (expected csv, gnuplot or svg)");
                    for (OutputFormat seen : formats)
                        if (seen == f)
                            throw ConfigError(line_no, "key 'formats': duplicate '" + tok + "'");
                    formats.push_back(f);
                }
            } else if (key == "condition") force_condition = parse_bool(value, line_no, key);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [output]");
        }
    }

    for (const char* name : {"grid", "energy", "solver", "constraints", "run", "output"})
        if (!sections_seen.contains(name))
            throw ConfigError(std::string("missing [") + name + "] section");

    ExperimentConfig cfg;
    if (!grid_dim) throw ConfigError("missing key 'dim' in [grid]");
    if (!grid_n) throw ConfigError("missing key 'n' in [grid]");
    if (*grid_dim != 1 && *grid_dim != 2)
        throw ConfigError("key 'dim' must be 1 or 2, got " + std::to_string(*grid_dim));
    try {
        cfg.grid = (*grid_dim == 1) ? GridSpec::line(*grid_n) : GridSpec::square(*grid_n);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("key 'n': ") + e.what());
    }

    if (!energy_kind) throw ConfigError("missing key 'kind' in [energy]");
    if (*energy_kind == "gradient") cfg.energy = EnergyKind::Gradient;
    else if (*energy_kind == "laplacian") cfg.energy = EnergyKind::Laplacian;
    else throw ConfigError("key 'kind' in [energy] must be gradient or laplacian, got '" +
                           *energy_kind + "'");

    if (!solver_kind) throw ConfigError("missing key 'kind' in [solver]");
    if (*solver_kind == "jacobi") cfg.solver.algo = SolverAlgo::Jacobi;
    else if (*solver_kind == "gauss_seidel") cfg.solver.algo = SolverAlgo::GaussSeidel;
    else if (*solver_kind == "ssor") cfg.solver.algo = SolverAlgo::Ssor;
    else if (*solver_kind == "cg") cfg.solver.algo = SolverAlgo::ConjugateGradient;
    else throw ConfigError("key 'kind' in [solver] must be jacobi, gauss_seidel, ssor or cg, "
                           "got '" + *solver_kind + "'");
    if (omega) {
        if (!(*omega > 0.0 && *omega < 2.0))
            throw ConfigError("key 'omega' must lie in (0, 2), got " +
                              detail::format_double(*omega));
        cfg.solver.omega = *omega;
    }

    for (const auto& raw : raw_constraints) {
        const size_t want = cfg.grid.is_2d() ? 3 : 2;
        if (raw.fields.size() != want)
            throw ConfigError(raw.line, std::string("key 'constraint': expected '") +
                                            (cfg.grid.is_2d() ? "i j value" : "i value") +
                                            "'");
        try {
            const int i = parse_int(raw.fields[0], raw.line, "constraint");
            const int j = cfg.grid.is_2d() ? parse_int(raw.fields[1], raw.line, "constraint") : 0;
            const double v = parse_double(raw.fields.back(), raw.line, "constraint");
            cfg.constraints.push_back({vertex_index(cfg.grid, i, j), v});
        } catch (const DomainError& e) {
            throw ConfigError(raw.line, std::string("key 'constraint': ") + e.what());
        }
        for (size_t a = 0; a + 1 < cfg.constraints.size(); ++a)
            if (cfg.constraints[a].vertex == cfg.constraints.back().vertex)
                throw ConfigError(raw.line, "key 'constraint': duplicate vertex " +
                                                std::to_string(cfg.constraints.back().vertex));
    }
    if (cfg.constraints.empty()) {
        if (!cfg.grid.is_2d())
            throw ConfigError("[constraints] section has no constraint entries");
        const int n = cfg.grid.n;
        cfg.constraints = {{vertex_index(cfg.grid, 0, 0), 0.0},
                           {vertex_index(cfg.grid, n - 1, n - 1), 0.0},
                           {vertex_index(cfg.grid, n / 2, n / 2), 1.0}};
    }

    if (!max_iterations) throw ConfigError("missing key 'max_iterations' in [run]");
    if (*max_iterations < 1)
        throw ConfigError("key 'max_iterations' must be >= 1, got " +
                          std::to_string(*max_iterations));
    cfg.run.max_iterations = *max_iterations;
    if (tolerance) {
        if (*tolerance < 0.0) throw ConfigError("key 'tolerance' must be >= 0");
        cfg.run.tolerance = *tolerance;
    }
    if (snapshot_stride) {
        if (*snapshot_stride < 1)
            throw ConfigError("key 'snapshot_stride' must be >= 1, got " +
                              std::to_string(*snapshot_stride));
        cfg.run.snapshot_stride = *snapshot_stride;
    }
    if (snapshot_iterations) {
        if (snapshot_iterations->back() > cfg.run.max_iterations)
            throw ConfigError("key 'snapshot_iterations': entry " +
                              std::to_string(snapshot_iterations->back()) +
                              " exceeds max_iterations " +
                              std::to_string(cfg.run.max_iterations));
        cfg.run.snapshot_iterations = std::move(*snapshot_iterations);
    }
    if (!initial_guess.empty()) {
        if (static_cast<int>(initial_guess.size()) != cfg.grid.vertex_count())
            throw ConfigError("key 'initial_guess': expected " +
                              std::to_string(cfg.grid.vertex_count()) + " values, got " +
                              std::to_string(initial_guess.size()));
        cfg.run.initial_guess = std::move(initial_guess);
    }

    if (formats.empty()) throw ConfigError("key 'formats' in [output] must list at least one "
                                           "of csv, gnuplot, svg");
    cfg.formats = std::move(formats);
    cfg.output_directory = std::move(directory);
    cfg.force_condition = force_condition;
    return cfg;
}

/// Canonical text form of a config; parse_config(render_config(c)) == c.
inline std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "dim = " << (cfg.grid.is_2d() ? 2 : 1) << "\n";
    out << "n = " << cfg.grid.n << "\n\n";
    out << "[energy]\n";
    out << "kind = " << to_string(cfg.energy) << "\n\n";
    out << "[solver]\n";
    out << "kind = " << to_string(cfg.solver.algo) << "\n";
    out << "omega = " << detail::format_double(cfg.solver.omega) << "\n\n";
    out << "[constraints]\n";
    for (const auto& c : cfg.constraints) {
        const auto [i, j] = vertex_coords(cfg.grid, c.vertex);
        out << "constraint = " << i;
        if (cfg.grid.is_2d()) out << " " << j;
        out << " " << detail::format_double(c.value) << "\n";
    }
    out << "\n[run]\n";
    out << "max_iterations = " << cfg.run.max_iterations << "\n";
    out << "tolerance = " << detail::format_double(cfg.run.tolerance) << "\n";
    out << "snapshot_stride = " << cfg.run.snapshot_stride << "\n";
    if (cfg.run.snapshot_iterations) {
        out << "snapshot_iterations =";
        for (int k : *cfg.run.snapshot_iterations) out << " " << k;
        out << "\n";
    }
    if (!cfg.run.initial_guess.empty()) {
        out << "initial_guess =";
        for (double v : cfg.run.initial_guess) out << " " << detail::format_double(v);
        out << "\n";
    }
    out << "\n[output]\n";
    if (!cfg.output_directory.empty()) out << "directory = " << cfg.output_directory << "\n";
    out << "formats =";
    for (OutputFormat f : cfg.formats) out << " " << to_string(f);
    out << "\n";
    out << "condition = " << (cfg.force_condition ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace gridsolve
