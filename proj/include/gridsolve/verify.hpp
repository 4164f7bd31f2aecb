#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridsolve/experiment.hpp"
#include "gridsolve/gridsolve.hpp"

namespace gridsolve::verify {

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

struct AcceptanceOptions {
    std::filesystem::path experiments_dir;    // shipped fig1_* / fig3_* configs
    std::filesystem::path work_dir;           // scratch space for run outputs
    std::optional<std::string> cli_command;   // run configs through this binary when set
};

namespace detail {

inline NormalSystem make_normal(const GridSpec& grid, EnergyKind energy,
                                std::vector<Constraint> cons) {
    const ConstraintSet set{std::move(cons)};
    const LeastSquaresSystem sys = (energy == EnergyKind::Gradient)
                                       ? assemble_gradient(grid, set)
                                       : assemble_laplacian(grid, set);
    return normal_equations(sys);
}

inline std::vector<double> oracle_solve(const NormalSystem& sys) {
    return dense_solve(densify(sys.M), sys.rhs).x;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct Check {
    bool passed = true;
    std::string detail;

    void expect(bool ok, const std::string& msg) {
        if (!ok) {
            passed = false;
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
    void note(const std::string& msg) {
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
};

inline bool matrix_equals(const SparseMatrix& m, const std::vector<std::vector<double>>& want) {
    if (m.rows() != static_cast<int>(want.size())) return false;
    for (int r = 0; r < m.rows(); ++r) {
        if (m.cols() != static_cast<int>(want[static_cast<size_t>(r)].size())) return false;
        for (int c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != want[static_cast<size_t>(r)][static_cast<size_t>(c)]) return false;
    }
    return true;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read '" + p.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace detail

// --- criterion 1: the printed 1D n=5 systems, entrywise ---------------------

inline CriterionResult criterion_golden_matrices() {
    using detail::matrix_equals;
    detail::Check c;

    const GridSpec g5 = GridSpec::line(5);
    const ConstraintSet cons{{{0, 2.0}, {4, 6.0}}};

    const LeastSquaresSystem grad = assemble_gradient(g5, cons);
    c.expect(matrix_equals(grad.A, {{0, -1, 0, 0, 0},
                                    {0, 1, -1, 0, 0},
                                    {0, 0, 1, -1, 0},
                                    {0, 0, 0, 1, 0},
                                    {1, 0, 0, 0, 0},
                                    {0, 0, 0, 0, 1}}),
             "gradient A mismatch");
    c.expect(grad.b == std::vector<double>{-2, 0, 0, 6, 2, 6}, "gradient b mismatch");
    const NormalSystem ngrad = normal_equations(grad);
    c.expect(matrix_equals(ngrad.M, {{1, 0, 0, 0, 0},
                                     {0, 2, -1, 0, 0},
                                     {0, -1, 2, -1, 0},
                                     {0, 0, -1, 2, 0},
                                     {0, 0, 0, 0, 1}}),
             "gradient A^T A mismatch");
    c.expect(ngrad.rhs == std::vector<double>{2, 2, 0, 6, 6}, "gradient A^T b mismatch");

    const LeastSquaresSystem lap = assemble_laplacian(g5, cons);
    c.expect(matrix_equals(lap.A, {{0, 2, -1, 0, 0},
                                   {0, -1, 2, -1, 0},
                                   {0, 0, -1, 2, 0},
                                   {1, 0, 0, 0, 0},
                                   {0, 0, 0, 0, 1}}),
             "laplacian A mismatch");
    c.expect(lap.b == std::vector<double>{2, 0, 6, 2, 6}, "laplacian b mismatch");
    const NormalSystem nlap = normal_equations(lap);
    c.expect(matrix_equals(nlap.M, {{1, 0, 0, 0, 0},
                                    {0, 5, -4, 1, 0},
                                    {0, -4, 6, -4, 0},
                                    {0, 1, -4, 5, 0},
                                    {0, 0, 0, 0, 1}}),
             "laplacian A^T A mismatch");
    c.expect(nlap.rhs == std::vector<double>{2, 4, -8, 12, 6}, "laplacian A^T b mismatch");

    return {1, "golden 1D n=5 systems (exact integer match)", c.passed, c.detail};
}

// --- criterion 2: condition numbers ------------------------------------------

inline CriterionResult criterion_condition_numbers() {
    detail::Check c;
    auto kappa = [](EnergyKind e, int n) {
        const NormalSystem sys = detail::make_normal(
            GridSpec::line(n), e, {{0, 2.0}, {n - 1, 6.0}});
        return condition_number(densify(sys.M)).condition_number;
    };
    const double g5 = kappa(EnergyKind::Gradient, 5);
    const double g50 = kappa(EnergyKind::Gradient, 50);
    const double l5 = kappa(EnergyKind::Laplacian, 5);
    const double l50 = kappa(EnergyKind::Laplacian, 50);
    c.expect(g5 >= 5.8 && g5 <= 6.0,
             "kappa(gradient, n=5) = " + detail::fmt(g5) + " outside 5.9 +/- 0.1");
    c.expect(g50 >= 900.0 && g50 <= 1100.0,
             "kappa(gradient, n=50) = " + detail::fmt(g50) + " outside [900, 1100]");
    c.expect(l5 >= 34.2 && l5 <= 34.6,
             "kappa(laplacian, n=5) = " + detail::fmt(l5) + " outside 34.4 +/- 0.2");
    c.expect(l50 >= 8.0e5 && l50 <= 1.05e6,
             "kappa(laplacian, n=50) = " + detail::fmt(l50) + " outside [8.0e5, 1.05e6]");
    if (c.passed)
        c.note("g5=" + detail::fmt(g5) + " g50=" + detail::fmt(g50) + " l5=" + detail::fmt(l5) +
               " l50=" + detail::fmt(l50));
    return {2, "condition numbers of the 1D normal matrices", c.passed, c.detail};
}

// --- criterion 3: solver ordering at equal iteration count -------------------

inline CriterionResult criterion_convergence_ordering() {
    detail::Check c;
    const NormalSystem sys = detail::make_normal(GridSpec::line(20), EnergyKind::Gradient,
                                                 {{0, 2.0}, {19, 6.0}});
    RunSettings s;
    s.max_iterations = 120;
    s.tolerance = 0.0;      // equal iteration count for all solvers
    s.snapshot_stride = 121;
    const double rj = jacobi_solve(sys, s).residual_norms.back().second;
    const double rg = gauss_seidel_solve(sys, s).residual_norms.back().second;
    const double rs = ssor_solve(sys, s, 1.5).residual_norms.back().second;
    const double rc = cg_solve(sys, s).residual_norms.back().second;
    c.expect(rj >= 1.1 * rg, "jacobi/gs gap " + detail::fmt(rj / rg) + " < 1.1");
    c.expect(rg >= 1.1 * rs, "gs/ssor gap " + detail::fmt(rg / rs) + " < 1.1");
    c.expect(rs >= 1.1 * rc, "ssor/cg gap " + detail::fmt(rs / rc) + " < 1.1");
    c.note("residuals at 120 iterations: J=" + detail::fmt(rj) + " GS=" + detail::fmt(rg) +
           " SSOR=" + detail::fmt(rs) + " CG=" + detail::fmt(rc));
    return {3, "residual ordering Jacobi > GS > SSOR(1.5) > CG at 120 iterations", c.passed,
            c.detail};
}

// --- criterion 4: CG direct-solver bound and its violation -------------------

inline CriterionResult criterion_cg_bound() {
    detail::Check c;
    RunSettings s;
    s.tolerance = 1e-10;
    s.snapshot_stride = 1 << 20;

    const NormalSystem grad = detail::make_normal(GridSpec::line(20), EnergyKind::Gradient,
                                                  {{0, 2.0}, {19, 6.0}});
    s.max_iterations = 20;
    const SolveTrace tg = cg_solve(grad, s);
    c.expect(tg.converged_at.has_value(),
             "CG did not reach 1e-10 within 20 iterations on the gradient system");
    if (tg.converged_at) c.note("gradient: converged at " + std::to_string(*tg.converged_at));

    const NormalSystem lap = detail::make_normal(GridSpec::line(20), EnergyKind::Laplacian,
                                                 {{0, 2.0}, {19, 6.0}});
    s.max_iterations = 200;
    const SolveTrace tl = cg_solve(lap, s);
    c.expect(tl.converged_at.has_value() && *tl.converged_at > 20,
             "CG on the laplacian system should need more than 20 iterations");
    if (tl.converged_at) c.note("laplacian: converged at " + std::to_string(*tl.converged_at));
    return {4, "CG within 20 iterations (gradient) and beyond 20 (laplacian), n=20", c.passed,
            c.detail};
}

// --- criterion 5: Jacobi front propagation -----------------------------------

namespace detail {

/// BFS distance from `sources` in the coupling graph of M (one edge per
/// off-diagonal nonzero). This is the graph information actually crosses in
/// one sweep; for the gradient energy it coincides with grid adjacency,
/// while the laplacian stencil also couples vertices two grid hops apart.
inline std::vector<int> coupling_distance(const SparseMatrix& M,
                                          const std::vector<VertexId>& sources) {
    std::vector<int> dist(static_cast<size_t>(M.rows()), -1);
    std::vector<VertexId> queue;
    for (VertexId s : sources)
        if (dist[static_cast<size_t>(s)] != 0) {
            dist[static_cast<size_t>(s)] = 0;
            queue.push_back(s);
        }
    for (size_t head = 0; head < queue.size(); ++head) {
        const VertexId u = queue[head];
        for (const auto& e : M.row(u)) {
            if (e.col == u) continue;
            if (dist[static_cast<size_t>(e.col)] < 0) {
                dist[static_cast<size_t>(e.col)] = dist[static_cast<size_t>(u)] + 1;
                queue.push_back(e.col);
            }
        }
    }
    return dist;
}

}  // namespace detail

inline CriterionResult criterion_front_propagation() {
    detail::Check c;
    struct Case {
        GridSpec grid;
        EnergyKind energy;
        std::vector<Constraint> cons;
    };
    const std::vector<Case> cases = {
        {GridSpec::line(20), EnergyKind::Gradient, {{0, 2.0}, {19, 6.0}}},
        {GridSpec::line(20), EnergyKind::Laplacian, {{0, 2.0}, {19, 6.0}}},
        {GridSpec::square(10), EnergyKind::Gradient,
         {{0, 0.0}, {99, 0.0}, {55, 1.0}}},
        {GridSpec::square(10), EnergyKind::Laplacian,
         {{0, 0.0}, {99, 0.0}, {55, 1.0}}},
    };
    for (const auto& tc : cases) {
        const NormalSystem sys = detail::make_normal(tc.grid, tc.energy, tc.cons);
        std::vector<VertexId> sources;
        for (int v = 0; v < sys.order(); ++v)
            if (sys.rhs[static_cast<size_t>(v)] != 0.0) sources.push_back(v);
        // For the gradient energy the normal matrix couples grid neighbors
        // only, so the grid metric applies verbatim. The laplacian front is
        // measured in the matrix coupling graph: its (-1, 2, -1) rows couple
        // second neighbors, so the grid-distance bound does not hold there.
        const std::vector<int> dist =
            tc.energy == EnergyKind::Gradient
                ? graph_distance(tc.grid, sources)
                : detail::coupling_distance(sys.M, sources);

        RunSettings s;
        s.max_iterations = 2 * (tc.grid.n - 1);
        s.tolerance = 0.0;
        s.snapshot_stride = 1;
        const SolveTrace trace = jacobi_solve(sys, s);
        for (const auto& [k, x] : trace.snapshots) {
            if (k == 0) continue;
            for (VertexId v : support_front(x, 1e-14)) {
                if (dist[static_cast<size_t>(v)] > k || dist[static_cast<size_t>(v)] < 0) {
                    c.expect(false, std::string(to_string(tc.energy)) +
                                        (tc.grid.is_2d() ? " 2D" : " 1D") + ": vertex " +
                                        std::to_string(v) + " nonzero at iteration " +
                                        std::to_string(k) + " but distance " +
                                        std::to_string(dist[static_cast<size_t>(v)]));
                    break;
                }
            }
            if (!c.passed) break;
        }
        if (!c.passed) break;
    }
    if (c.passed)
        c.note("gradient checked against grid distance, laplacian against its "
               "pentadiagonal coupling graph");
    return {5, "Jacobi nonzero support stays within front distance k of supp(A^T b)", c.passed,
            c.detail};
}

// --- criterion 6: Gauss-Seidel sweep-order asymmetry --------------------------

inline CriterionResult criterion_gs_ordering() {
    detail::Check c;
    RunSettings s;
    s.tolerance = 0.0;
    s.snapshot_stride = 1;

    {
        const NormalSystem sys =
            detail::make_normal(GridSpec::line(20), EnergyKind::Gradient, {{0, 2.0}});
        s.max_iterations = 1;
        const SolveTrace t = gauss_seidel_solve(sys, s);
        const auto& x1 = t.snapshots.back().second;
        bool all_nonzero = true;
        for (double v : x1) all_nonzero = all_nonzero && v != 0.0;
        c.expect(t.snapshots.back().first == 1 && all_nonzero,
                 "left-end constraint: expected full support after one sweep");
    }
    {
        const NormalSystem sys =
            detail::make_normal(GridSpec::line(20), EnergyKind::Gradient, {{19, 6.0}});
        s.max_iterations = 19;
        const SolveTrace t = gauss_seidel_solve(sys, s);
        for (const auto& [k, x] : t.snapshots) {
            if (k < 19)
                c.expect(x[0] == 0.0, "right-end constraint: first coordinate nonzero at sweep " +
                                          std::to_string(k) + " (expected sweep 19)");
            else if (k == 19)
                c.expect(x[0] != 0.0,
                         "right-end constraint: first coordinate still zero at sweep 19");
        }
    }
    return {6, "Gauss-Seidel order asymmetry: 1 sweep vs 19 sweeps to reach the far end",
            c.passed, c.detail};
}

// --- criterion 7: ramp solution ----------------------------------------------

inline CriterionResult criterion_ramp_solution() {
    detail::Check c;
    for (int n : {5, 20, 100}) {
        for (auto [a, b] : std::vector<std::pair<double, double>>{{2, 6}, {0, 1}, {-3, 7}}) {
            const NormalSystem sys = detail::make_normal(GridSpec::line(n),
                                                         EnergyKind::Gradient,
                                                         {{0, a}, {n - 1, b}});
            const std::vector<double> x = detail::oracle_solve(sys);
            double err = 0.0;
            for (int i = 0; i < n; ++i)
                err = std::max(err, std::abs(x[static_cast<size_t>(i)] -
                                             (a + i * (b - a) / (n - 1))));
            c.expect(err <= 1e-8, "n=" + std::to_string(n) + " (" + detail::fmt(a) + ", " +
                                      detail::fmt(b) + "): ramp error " + detail::fmt(err));
        }
    }
    return {7, "direct solution of the gradient system is the interpolating ramp", c.passed,
            c.detail};
}

// --- criterion 8: 1D gradient/laplacian equivalence ---------------------------

inline CriterionResult criterion_equivalence_1d() {
    detail::Check c;
    for (int n : {5, 20}) {
        const std::vector<Constraint> cons{{0, 2.0}, {n - 1, 6.0}};
        const auto xg = detail::oracle_solve(
            detail::make_normal(GridSpec::line(n), EnergyKind::Gradient, cons));
        const auto xl = detail::oracle_solve(
            detail::make_normal(GridSpec::line(n), EnergyKind::Laplacian, cons));
        const double d = detail::max_abs_diff(xg, xl);
        c.expect(d <= 1e-6, "n=" + std::to_string(n) + ": minimizers differ by " +
                                detail::fmt(d));
    }
    return {8, "gradient and laplacian minimizers agree in 1D with endpoint constraints",
            c.passed, c.detail};
}

// --- criterion 9: 2D milestones ----------------------------------------------

inline CriterionResult criterion_2d_milestones() {
    detail::Check c;
    const int n = 50;
    const GridSpec grid = GridSpec::square(n);
    const std::vector<Constraint> cons{
        {vertex_index(grid, 0, 0), 0.0},
        {vertex_index(grid, n - 1, n - 1), 0.0},
        {vertex_index(grid, n / 2, n / 2), 1.0}};
    const NormalSystem sys = detail::make_normal(grid, EnergyKind::Gradient, cons);

    RunSettings s;
    s.max_iterations = 2500;
    s.tolerance = 1e-10;
    s.snapshot_stride = 2500;
    const SolveTrace cg = cg_solve(sys, s);
    const double final_res = cg.residual_norms.back().second;
    c.expect(final_res <= 1e-8, "CG residual at iteration " +
                                    std::to_string(cg.iterations_run) + " is " +
                                    detail::fmt(final_res) + " > 1e-8");
    c.note("CG: residual " + detail::fmt(final_res) + " after " +
           std::to_string(cg.iterations_run) + " iterations");

    s.max_iterations = 98;  // 2(n-1)
    s.tolerance = 0.0;
    s.snapshot_stride = 98;
    const SolveTrace jt = jacobi_solve(sys, s);
    const auto& x98 = jt.snapshots.back().second;
    const ConstraintSet cset{cons};
    double min_unconstrained = std::numeric_limits<double>::infinity();
    bool constrained_ok = true;
    for (int v = 0; v < sys.order(); ++v) {
        if (auto val = cset.value_of(v))
            constrained_ok = constrained_ok && x98[static_cast<size_t>(v)] == *val;
        else
            min_unconstrained = std::min(min_unconstrained,
                                         std::abs(x98[static_cast<size_t>(v)]));
    }
    c.expect(min_unconstrained > 1e-14,
             "after 98 Jacobi iterations some unconstrained vertex is below 1e-14 (min " +
                 detail::fmt(min_unconstrained) + ")");
    c.expect(constrained_ok, "constrained vertices must hold their values exactly");

    std::vector<VertexId> sources;
    for (int v = 0; v < sys.order(); ++v)
        if (sys.rhs[static_cast<size_t>(v)] != 0.0) sources.push_back(v);
    const std::vector<int> dist = graph_distance(grid, sources);
    const int max_dist = *std::max_element(dist.begin(), dist.end());
    c.expect(max_dist <= 98, "support front cannot complete: max distance " +
                                 std::to_string(max_dist));
    c.note("min unconstrained |x| at 98 sweeps: " + detail::fmt(min_unconstrained) +
           ", max source distance " + std::to_string(max_dist));
    return {9, "2D n=50: CG residual <= 1e-8 by 2500; Jacobi front complete by 98 sweeps",
            c.passed, c.detail};
}

// --- criterion 10: solver-vs-oracle equivalence on randomized systems ---------

inline CriterionResult criterion_oracle_equivalence() {
    detail::Check c;
    std::mt19937 rng(20250810u);
    auto uniform_int = [&rng](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto uniform_real = [&rng](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    int accepted = 0, attempts = 0;
    while (accepted < 20 && attempts < 1000) {
        ++attempts;
        const int family = uniform_int(0, 3);
        GridSpec grid = GridSpec::line(3);
        EnergyKind energy = EnergyKind::Gradient;
        int ncons = 1;
        switch (family) {
            case 0:
                grid = GridSpec::line(uniform_int(3, 40));
                energy = EnergyKind::Gradient;
                ncons = uniform_int(1, 3);
                break;
            case 1:
                grid = GridSpec::line(uniform_int(3, 4));
                energy = EnergyKind::Laplacian;
                ncons = 2;
                break;
            case 2:
                grid = GridSpec::square(uniform_int(3, 12));
                energy = EnergyKind::Gradient;
                ncons = uniform_int(1, 4);
                break;
            case 3:
                grid = GridSpec::square(3);
                energy = EnergyKind::Laplacian;
                ncons = uniform_int(4, 6);
                break;
        }
        const int N = grid.vertex_count();
        if (ncons > N) continue;
        std::set<int> verts;
        while (static_cast<int>(verts.size()) < ncons) verts.insert(uniform_int(0, N - 1));
        std::vector<Constraint> cons;
        for (int v : verts) cons.push_back({v, uniform_real(-5.0, 5.0)});

        const NormalSystem sys = detail::make_normal(grid, energy, cons);
        const DenseMatrix dense = densify(sys.M);
        const SpectrumSummary spec = condition_number(dense);
        if (spec.near_null_dimension > 0 || spec.condition_number > 1e6) continue;

        // keep the sampled family within reach of all four iterations:
        // reject systems whose Jacobi iteration does not contract
        {
            DenseMatrix scaled = dense;
            for (int i = 0; i < N; ++i) {
                const double di = std::sqrt(dense.at(i, i));
                for (int j = 0; j < N; ++j)
                    scaled.at(i, j) = dense.at(i, j) / (di * std::sqrt(dense.at(j, j)));
            }
            const auto eig = symmetric_eigen(scaled);
            const double rate = std::max(std::abs(1.0 - eig.values.front()),
                                         std::abs(1.0 - eig.values.back()));
            if (rate >= 0.999) continue;
        }

        ++accepted;
        const std::vector<double> oracle = detail::oracle_solve(sys);
        RunSettings s;
        s.max_iterations = 200000;
        s.tolerance = 1e-10;
        s.snapshot_stride = s.max_iterations;
        for (SolverAlgo algo : {SolverAlgo::Jacobi, SolverAlgo::GaussSeidel, SolverAlgo::Ssor,
                                SolverAlgo::ConjugateGradient}) {
            const SolveTrace t = solve(sys, {algo, 1.5}, s);
            const std::string tag = std::string(to_string(algo)) + " on " +
                                    to_string(energy) + (grid.is_2d() ? " 2D n=" : " 1D n=") +
                                    std::to_string(grid.n);
            if (!t.converged_at) {
                c.expect(false, tag + ": no convergence to 1e-10");
                continue;
            }
            const double err = detail::max_abs_diff(t.snapshots.back().second, oracle);
            c.expect(err <= 1e-6, tag + ": error vs direct solution " + detail::fmt(err));
        }
    }
    c.expect(accepted == 20, "only " + std::to_string(accepted) +
                                 " valid systems sampled in " + std::to_string(attempts) +
                                 " attempts");
    if (c.passed) c.note("20 systems, 4 solvers each, all within 1e-6 of the direct solution");
    return {10, "all four solvers match the direct solver on 20 randomized systems", c.passed,
            c.detail};
}

// --- criterion 11: figure config smoke + determinism ---------------------------

namespace detail {

inline std::set<int> csv_iteration_set(const std::filesystem::path& csv) {
    std::ifstream in(csv);
    if (!in) throw IoError("cannot read '" + csv.string() + "'");
    std::string line;
    std::getline(in, line);  // header
    std::set<int> iterations;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        iterations.insert(std::stoi(line.substr(0, comma)));
    }
    return iterations;
}

inline int count_occurrences(const std::string& hay, const std::string& needle) {
    int count = 0;
    size_t pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

inline std::set<int> expected_snapshots(const ExperimentConfig& cfg, int iterations_run) {
    std::set<int> expected{0};
    for (int k = 1; k <= iterations_run; ++k) {
        const bool due = cfg.run.snapshot_iterations
                             ? std::binary_search(cfg.run.snapshot_iterations->begin(),
                                                  cfg.run.snapshot_iterations->end(), k)
                             : (k % cfg.run.snapshot_stride == 0);
        if (due) expected.insert(k);
    }
    if (iterations_run > 0) expected.insert(iterations_run);
    return expected;
}

}  // namespace detail

inline CriterionResult criterion_figure_configs(const AcceptanceOptions& opt) {
    detail::Check c;
    std::vector<std::filesystem::path> configs;
    if (std::filesystem::is_directory(opt.experiments_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(opt.experiments_dir)) {
            const std::string name = entry.path().filename().string();
            if (entry.path().extension() == ".ini" &&
                (name.rfind("fig1_", 0) == 0 || name.rfind("fig3_", 0) == 0))
                configs.push_back(entry.path());
        }
    }
    std::sort(configs.begin(), configs.end());
    c.expect(configs.size() == 24, "expected 24 fig1/fig3 configs in '" +
                                       opt.experiments_dir.string() + "', found " +
                                       std::to_string(configs.size()));

    for (const auto& cfg_path : configs) {
        if (!c.passed) break;
        const ExperimentConfig cfg = parse_config(detail::slurp(cfg_path));
        const std::string stem = cfg_path.stem().string();
        const auto dir_a = opt.work_dir / "figure_runs" / stem / "a";
        const auto dir_b = opt.work_dir / "figure_runs" / stem / "b";

        auto run_once = [&](const std::filesystem::path& out_dir) -> bool {
            if (opt.cli_command) {
                const std::string cmd = *opt.cli_command + " run '" + cfg_path.string() +
                                        "' --out '" + out_dir.string() + "' >/dev/null 2>&1";
                return std::system(cmd.c_str()) == 0;
            }
            try {
                run_experiment(cfg, out_dir.string());
                return true;
            } catch (const std::exception&) {
                return false;
            }
        };
        if (!run_once(dir_a) || !run_once(dir_b)) {
            c.expect(false, stem + ": run did not complete with exit code 0");
            break;
        }

        nlohmann::json manifest;
        {
            std::ifstream in(dir_a / "manifest.json");
            in >> manifest;
        }
        const int iterations_run = manifest["iterations_run"].get<int>();
        const std::set<int> expected = detail::expected_snapshots(cfg, iterations_run);

        const std::set<int> got = detail::csv_iteration_set(dir_a / "snapshots.csv");
        c.expect(got == expected, stem + ": snapshots.csv holds " +
                                      std::to_string(got.size()) + " iterations, expected " +
                                      std::to_string(expected.size()));

        const std::string svg = detail::slurp(dir_a / "waterfall.svg");
        const int polylines = detail::count_occurrences(svg, "<polyline");
        c.expect(polylines == static_cast<int>(expected.size()),
                 stem + ": waterfall has " + std::to_string(polylines) + " curves, expected " +
                     std::to_string(expected.size()));

        for (const char* name : {"snapshots.csv", "residuals.csv", "waterfall.svg"})
            c.expect(detail::slurp(dir_a / name) == detail::slurp(dir_b / name),
                     stem + ": second run differs in " + name);
    }
    if (c.passed) c.note(std::to_string(configs.size()) + " configs ran twice, byte-identical");
    return {11, "fig1/fig3 configs run cleanly, counts match, reruns byte-identical", c.passed,
            c.detail};
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<CriterionResult> results;
    results.push_back(criterion_golden_matrices());
    results.push_back(criterion_condition_numbers());
    results.push_back(criterion_convergence_ordering());
    results.push_back(criterion_cg_bound());
    results.push_back(criterion_front_propagation());
    results.push_back(criterion_gs_ordering());
    results.push_back(criterion_ramp_solution());
    results.push_back(criterion_equivalence_1d());
    results.push_back(criterion_2d_milestones());
    results.push_back(criterion_oracle_equivalence());
    results.push_back(criterion_figure_configs(opt));
    return results;
}

}  // namespace gridsolve::verify
