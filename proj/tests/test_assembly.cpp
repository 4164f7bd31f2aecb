#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gridsolve/assembly.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/spectral.hpp"

using namespace gridsolve;

namespace {

std::vector<std::vector<double>> dense_rows(const SparseMatrix& m) {
    std::vector<std::vector<double>> out(static_cast<size_t>(m.rows()),
                                         std::vector<double>(static_cast<size_t>(m.cols()), 0.0));
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r)) out[static_cast<size_t>(r)][static_cast<size_t>(e.col)] = e.value;
    return out;
}

// Brute-force normal equations: per entry, sum products in ascending row
// order, the same order the sparse accumulation uses.
struct DenseNormal {
    std::vector<std::vector<double>> M;
    std::vector<double> rhs;
};

DenseNormal brute_force_normal(const LeastSquaresSystem& sys) {
    const auto A = dense_rows(sys.A);
    const int rows = sys.A.rows(), cols = sys.A.cols();
    DenseNormal out{std::vector<std::vector<double>>(
                        static_cast<size_t>(cols), std::vector<double>(static_cast<size_t>(cols), 0.0)),
                    std::vector<double>(static_cast<size_t>(cols), 0.0)};
    for (int u = 0; u < cols; ++u) {
        for (int w = 0; w < cols; ++w) {
            double s = 0.0;
            for (int r = 0; r < rows; ++r)
                s += A[static_cast<size_t>(r)][static_cast<size_t>(u)] *
                     A[static_cast<size_t>(r)][static_cast<size_t>(w)];
            out.M[static_cast<size_t>(u)][static_cast<size_t>(w)] = s;
        }
        double s = 0.0;
        for (int r = 0; r < rows; ++r)
            s += A[static_cast<size_t>(r)][static_cast<size_t>(u)] * sys.b[static_cast<size_t>(r)];
        out.rhs[static_cast<size_t>(u)] = s;
    }
    return out;
}

// Plain Cholesky; true iff every pivot is strictly positive.
bool cholesky_succeeds(const SparseMatrix& M) {
    const int n = M.rows();
    std::vector<std::vector<double>> a = dense_rows(M);
    for (int k = 0; k < n; ++k) {
        double d = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (int j = 0; j < k; ++j) d -= a[static_cast<size_t>(k)][static_cast<size_t>(j)] *
                                         a[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (d <= 0.0) return false;
        const double l = std::sqrt(d);
        a[static_cast<size_t>(k)][static_cast<size_t>(k)] = l;
        for (int i = k + 1; i < n; ++i) {
            double s = a[static_cast<size_t>(i)][static_cast<size_t>(k)];
            for (int j = 0; j < k; ++j) s -= a[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                             a[static_cast<size_t>(k)][static_cast<size_t>(j)];
            a[static_cast<size_t>(i)][static_cast<size_t>(k)] = s / l;
        }
    }
    return true;
}

double sum_sq_objective_residual(const LeastSquaresSystem& sys, const std::vector<double>& x) {
    double total = 0.0;
    for (int r = 0; r < sys.objective_rows; ++r) {
        double rx = 0.0;
        for (const auto& e : sys.A.row(r)) rx += e.value * x[static_cast<size_t>(e.col)];
        const double d = rx - sys.b[static_cast<size_t>(r)];
        total += d * d;
    }
    return total;
}

}  // namespace

TEST_CASE("gradient n=5 with endpoints locked reproduces the reference system") {
    const auto sys = assemble_gradient(GridSpec::line(5), ConstraintSet{{{0, 2.0}, {4, 6.0}}});
    CHECK(sys.objective_rows == 4);
    CHECK(dense_rows(sys.A) == std::vector<std::vector<double>>{{0, -1, 0, 0, 0},
                                                                {0, 1, -1, 0, 0},
                                                                {0, 0, 1, -1, 0},
                                                                {0, 0, 0, 1, 0},
                                                                {1, 0, 0, 0, 0},
                                                                {0, 0, 0, 0, 1}});
    CHECK(sys.b == std::vector<double>{-2, 0, 0, 6, 2, 6});

    const auto normal = normal_equations(sys);
    CHECK(dense_rows(normal.M) == std::vector<std::vector<double>>{{1, 0, 0, 0, 0},
                                                                   {0, 2, -1, 0, 0},
                                                                   {0, -1, 2, -1, 0},
                                                                   {0, 0, -1, 2, 0},
                                                                   {0, 0, 0, 0, 1}});
    CHECK(normal.rhs == std::vector<double>{2, 2, 0, 6, 6});
}

TEST_CASE("laplacian n=5 with endpoints locked reproduces the reference system") {
    const auto sys = assemble_laplacian(GridSpec::line(5), ConstraintSet{{{0, 2.0}, {4, 6.0}}});
    CHECK(sys.objective_rows == 3);
    CHECK(dense_rows(sys.A) == std::vector<std::vector<double>>{{0, 2, -1, 0, 0},
                                                                {0, -1, 2, -1, 0},
                                                                {0, 0, -1, 2, 0},
                                                                {1, 0, 0, 0, 0},
                                                                {0, 0, 0, 0, 1}});
    CHECK(sys.b == std::vector<double>{2, 0, 6, 2, 6});

    const auto normal = normal_equations(sys);
    CHECK(dense_rows(normal.M) == std::vector<std::vector<double>>{{1, 0, 0, 0, 0},
                                                                   {0, 5, -4, 1, 0},
                                                                   {0, -4, 6, -4, 0},
                                                                   {0, 1, -4, 5, 0},
                                                                   {0, 0, 0, 0, 1}});
    CHECK(normal.rhs == std::vector<double>{2, 4, -8, 12, 6});
    CHECK(sys.warnings.empty());
}

TEST_CASE("zero-valued constraints fold to a zero right-hand side") {
    const auto sys = assemble_gradient(GridSpec::line(3), ConstraintSet{{{0, 0.0}, {2, 0.0}}});
    for (double v : sys.b) CHECK(v == 0.0);
}

TEST_CASE("laplacian n=3 keeps the single interior row") {
    const auto sys = assemble_laplacian(GridSpec::line(3), ConstraintSet{{{0, 0.0}, {2, 0.0}}});
    CHECK(sys.objective_rows == 1);
    CHECK(dense_rows(sys.A) == std::vector<std::vector<double>>{{0, 2, 0},
                                                                {1, 0, 0},
                                                                {0, 0, 1}});
    CHECK(sys.b == std::vector<double>{0, 0, 0});
}

TEST_CASE("laplacian minimizer with equal endpoint values is constant") {
    const auto sys = assemble_laplacian(GridSpec::line(4), ConstraintSet{{{0, 1.0}, {3, 1.0}}});
    const auto normal = normal_equations(sys);
    const auto x = dense_solve(densify(normal.M), normal.rhs).x;
    for (double v : x) CHECK(v == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("2D n=3 gradient has one row per edge plus constraint rows") {
    const GridSpec g = GridSpec::square(3);
    const ConstraintSet cons{{{vertex_index(g, 0, 0), 0.0},
                              {vertex_index(g, 2, 2), 0.0},
                              {vertex_index(g, 1, 1), 1.0}}};
    const auto sys = assemble_gradient(g, cons);
    CHECK(sys.objective_rows == 12);  // 2*3*2 edges, none dropped
    CHECK(sys.A.rows() == 15);
    // horizontal edges come first: row 0 is the (0,0)-(0,1) edge with the
    // constrained corner folded out
    CHECK(sys.A.at(0, 1) == -1.0);
    CHECK(sys.A.at(0, 0) == 0.0);
}

TEST_CASE("2D laplacian rows: two per interior vertex, one per boundary non-corner, none "
          "for corners") {
    const GridSpec g = GridSpec::square(3);
    const ConstraintSet cons{{{vertex_index(g, 0, 0), 0.0},
                              {vertex_index(g, 2, 2), 0.0},
                              {vertex_index(g, 1, 1), 1.0}}};
    const auto sys = assemble_laplacian(g, cons);
    // vertices: 4 corners (no rows), 4 boundary non-corner (1 row), 1 interior (2 rows)
    CHECK(sys.objective_rows == 6);
    CHECK(sys.A.rows() == 9);
    REQUIRE(sys.warnings.size() == 1);  // three constraints cannot pin the bilinear family

    // row-major emission: first row belongs to vertex (0,1), the horizontal
    // stencil along the top boundary line
    CHECK(sys.A.at(0, vertex_index(g, 0, 0)) == 0.0);  // folded? no: (0,0) constrained value 0
    CHECK(sys.A.at(0, vertex_index(g, 0, 1)) == 2.0);
    CHECK(sys.A.at(0, vertex_index(g, 0, 2)) == -1.0);
    // second row: vertex (1,0), vertical stencil along the left boundary
    CHECK(sys.A.at(1, vertex_index(g, 1, 0)) == 2.0);
    CHECK(sys.A.at(1, vertex_index(g, 2, 0)) == -1.0);
    // interior vertex (1,1) is constrained here, so its two rows fold to
    // pure neighbor terms: -x_left - x_right = -2 * value
    CHECK(sys.A.at(2, vertex_index(g, 1, 0)) == -1.0);
    CHECK(sys.A.at(2, vertex_index(g, 1, 2)) == -1.0);
    CHECK(sys.b[2] == -2.0);
}

TEST_CASE("2D laplacian null space includes bilinear ramps without enough constraints") {
    // f(i, j) = i * j has zero second differences along both axes, so the
    // objective annihilates it; with constraints pinned only at (0,0),
    // (n-1,n-1) and the center, f scaled to vanish there stays in the null
    // space of the normal matrix.
    const int n = 5;
    const GridSpec g = GridSpec::square(n);
    const ConstraintSet cons{{{vertex_index(g, 0, 0), 0.0},
                              {vertex_index(g, n - 1, n - 1), 0.0},
                              {vertex_index(g, n / 2, n / 2), 1.0}}};
    const auto sys = assemble_laplacian(g, cons);
    const auto normal = normal_equations(sys);
    std::vector<double> null_dir(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            null_dir[static_cast<size_t>(n * i + j)] = static_cast<double>(i - j);
    const auto mv = normal.M.multiply(null_dir);
    for (double v : mv) CHECK(v == Catch::Approx(0.0).margin(1e-12));
    CHECK_FALSE(cholesky_succeeds(normal.M));
}

TEST_CASE("an all-constrained grid yields identity rows only") {
    const auto sys = assemble_gradient(GridSpec::line(3),
                                       ConstraintSet{{{0, 2.0}, {1, 2.0}, {2, 2.0}}});
    CHECK(sys.objective_rows == 0);  // both edges folded away entirely
    const auto normal = normal_equations(sys);
    CHECK(dense_rows(normal.M) ==
          std::vector<std::vector<double>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(normal.rhs == sys.b);
}

TEST_CASE("assembly rejects bad constraint sets") {
    CHECK_THROWS_AS(assemble_gradient(GridSpec::line(5), ConstraintSet{}), DomainError);
    CHECK_THROWS_AS(assemble_laplacian(GridSpec::line(5), ConstraintSet{}), DomainError);
    CHECK_THROWS_AS((ConstraintSet{std::vector<Constraint>{{1, 2.0}, {1, 3.0}}}), DomainError);
    CHECK_THROWS_AS(assemble_gradient(GridSpec::line(5), ConstraintSet{{{9, 1.0}}}),
                    DomainError);
}

TEST_CASE("1D laplacian with one constraint records a warning instead of failing") {
    const auto sys = assemble_laplacian(GridSpec::line(6), ConstraintSet{{{0, 1.0}}});
    REQUIRE(sys.warnings.size() == 1);
    CHECK_FALSE(cholesky_succeeds(normal_equations(sys).M));

    const auto ok = assemble_laplacian(GridSpec::line(6), ConstraintSet{{{0, 1.0}, {5, 2.0}}});
    CHECK(ok.warnings.empty());
    CHECK(cholesky_succeeds(normal_equations(ok).M));
}

TEST_CASE("gradient normal matrix is positive definite with a single constraint") {
    for (int n : {3, 7, 12}) {
        const auto sys = assemble_gradient(GridSpec::line(n), ConstraintSet{{{n / 2, 1.0}}});
        CHECK(cholesky_succeeds(normal_equations(sys).M));
    }
    const GridSpec g = GridSpec::square(4);
    const auto sys = assemble_gradient(g, ConstraintSet{{{5, 1.0}}});
    CHECK(cholesky_succeeds(normal_equations(sys).M));
}

TEST_CASE("energy_value evaluates the direct sums") {
    const GridSpec g = GridSpec::line(5);
    const std::vector<double> ramp{2, 3, 4, 5, 6};
    CHECK(energy_value(g, EnergyKind::Gradient, ramp) == 4.0);
    CHECK(energy_value(g, EnergyKind::Laplacian, ramp) == 0.0);
    const std::vector<double> step{2, 2, 2, 2, 6};
    CHECK(energy_value(g, EnergyKind::Gradient, step) == 16.0);
    CHECK_THROWS_AS(energy_value(g, EnergyKind::Gradient, std::vector<double>{1, 2}),
                    DomainError);
}

TEST_CASE("normal equations equal the brute-force dense product to 0 ULP") {
    struct Case {
        GridSpec grid;
        EnergyKind energy;
        std::vector<Constraint> cons;
    };
    std::vector<Case> cases;
    for (int n : {3, 5, 8, 20, 50, 100})
        for (EnergyKind e : {EnergyKind::Gradient, EnergyKind::Laplacian})
            cases.push_back({GridSpec::line(n), e, {{0, 2.0}, {n - 1, 6.0}}});
    for (int n : {3, 5, 8, 10})
        for (EnergyKind e : {EnergyKind::Gradient, EnergyKind::Laplacian}) {
            const GridSpec g = GridSpec::square(n);
            cases.push_back({g, e,
                             {{vertex_index(g, 0, 0), 0.5},
                              {vertex_index(g, n - 1, n - 1), -1.25},
                              {vertex_index(g, n / 2, n / 2), 3.0}}});
        }
    cases.push_back({GridSpec::line(9), EnergyKind::Gradient, {{4, 1.75}}});

    for (const auto& tc : cases) {
        const auto sys = (tc.energy == EnergyKind::Gradient)
                             ? assemble_gradient(tc.grid, ConstraintSet{tc.cons})
                             : assemble_laplacian(tc.grid, ConstraintSet{tc.cons});
        const auto normal = normal_equations(sys);
        const auto brute = brute_force_normal(sys);
        const auto got = dense_rows(normal.M);
        REQUIRE(got.size() == brute.M.size());
        for (size_t u = 0; u < brute.M.size(); ++u)
            for (size_t w = 0; w < brute.M.size(); ++w)
                CHECK(got[u][w] == brute.M[u][w]);
        for (size_t u = 0; u < brute.rhs.size(); ++u)
            CHECK(normal.rhs[u] == brute.rhs[u]);
    }
}

TEST_CASE("normal matrix is bitwise symmetric") {
    const GridSpec g = GridSpec::square(6);
    const auto sys = assemble_laplacian(
        g, ConstraintSet{{{0, 1.0}, {35, 2.0}, {14, -0.5}, {9, 4.0}}});
    CHECK(normal_equations(sys).M.is_structurally_symmetric());
}

TEST_CASE("gradient normal rows match the graph Laplacian on unconstrained vertices") {
    for (int n = 3; n <= 10; ++n) {
        for (const GridSpec g : {GridSpec::line(n), GridSpec::square(n)}) {
            const std::vector<Constraint> cons{{0, 1.5}, {g.vertex_count() - 1, -2.0}};
            const ConstraintSet cset{cons};
            const auto normal = normal_equations(assemble_gradient(g, cset));
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                if (cset.value_of(v)) continue;
                const auto nv = neighbors(g, v);
                CHECK(normal.M.at(v, v) == static_cast<double>(nv.size()));
                for (VertexId u : nv)
                    CHECK(normal.M.at(v, u) == (cset.value_of(u) ? 0.0 : -1.0));
                // nothing outside the diagonal and the neighborhood
                for (const auto& e : normal.M.row(v))
                    if (e.col != v)
                        CHECK(std::find(nv.begin(), nv.end(), e.col) != nv.end());
            }
        }
    }
}

TEST_CASE("the direct solution minimizes the energy over unconstrained coordinates") {
    struct Case {
        GridSpec grid;
        EnergyKind energy;
        std::vector<Constraint> cons;
    };
    const GridSpec sq = GridSpec::square(5);
    const std::vector<Case> cases = {
        {GridSpec::line(10), EnergyKind::Gradient, {{0, 2.0}, {9, 6.0}}},
        {GridSpec::line(10), EnergyKind::Laplacian, {{0, 2.0}, {9, 6.0}}},
        {sq, EnergyKind::Gradient,
         {{vertex_index(sq, 0, 0), 0.0}, {vertex_index(sq, 4, 4), 0.0},
          {vertex_index(sq, 2, 2), 1.0}}},
        {sq, EnergyKind::Laplacian,
         {{vertex_index(sq, 0, 0), 1.0}, {vertex_index(sq, 0, 4), 2.0},
          {vertex_index(sq, 4, 0), -1.0}, {vertex_index(sq, 2, 3), 0.5}}},
    };
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> eps(-0.1, 0.1);
    for (const auto& tc : cases) {
        const ConstraintSet cset{tc.cons};
        const auto sys = (tc.energy == EnergyKind::Gradient)
                             ? assemble_gradient(tc.grid, cset)
                             : assemble_laplacian(tc.grid, cset);
        const auto normal = normal_equations(sys);
        const auto star = dense_solve(densify(normal.M), normal.rhs).x;
        const double base = energy_value(tc.grid, tc.energy, star);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> x = star;
            for (VertexId v = 0; v < tc.grid.vertex_count(); ++v)
                if (!cset.value_of(v)) x[static_cast<size_t>(v)] += eps(rng);
            CHECK(base <= energy_value(tc.grid, tc.energy, x) + 1e-9 * (1.0 + base));
        }
    }
}

TEST_CASE("objective rows square to the energy: factor 4 laplacian, 1 gradient") {
    struct Case {
        GridSpec grid;
        std::vector<Constraint> cons;
    };
    const GridSpec sq = GridSpec::square(5);
    const std::vector<Case> cases = {
        {GridSpec::line(7), {{0, 2.0}, {6, -1.0}}},
        {sq, {{vertex_index(sq, 0, 0), 1.0}, {vertex_index(sq, 2, 2), 3.0}}},
    };
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (const auto& tc : cases) {
        const ConstraintSet cset{tc.cons};
        std::vector<double> x(static_cast<size_t>(tc.grid.vertex_count()));
        for (VertexId v = 0; v < tc.grid.vertex_count(); ++v)
            x[static_cast<size_t>(v)] = cset.value_of(v).value_or(val(rng));

        const auto grad = assemble_gradient(tc.grid, cset);
        const double eg = energy_value(tc.grid, EnergyKind::Gradient, x);
        CHECK(sum_sq_objective_residual(grad, x) == Catch::Approx(eg).epsilon(1e-12));

        const auto lap = assemble_laplacian(tc.grid, cset);
        const double el = energy_value(tc.grid, EnergyKind::Laplacian, x);
        CHECK(sum_sq_objective_residual(lap, x) == Catch::Approx(4.0 * el).epsilon(1e-12));
    }
}

TEST_CASE("gradient and laplacian minimizers agree in 1D under endpoint constraints") {
    for (int n : {5, 20}) {
        const ConstraintSet cons{{{0, 2.0}, {n - 1, 6.0}}};
        const auto ng = normal_equations(assemble_gradient(GridSpec::line(n), cons));
        const auto xg = dense_solve(densify(ng.M), ng.rhs).x;
        const auto nl = normal_equations(assemble_laplacian(GridSpec::line(n), cons));
        const auto xl = dense_solve(densify(nl.M), nl.rhs).x;
        for (int i = 0; i < n; ++i)
            CHECK(xg[static_cast<size_t>(i)] ==
                  Catch::Approx(xl[static_cast<size_t>(i)]).margin(1e-8));
    }
}
