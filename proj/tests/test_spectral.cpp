#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gridsolve/assembly.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/spectral.hpp"

using namespace gridsolve;

namespace {

NormalSystem make_normal(const GridSpec& grid, EnergyKind energy,
                         std::vector<Constraint> cons) {
    const ConstraintSet set{std::move(cons)};
    return normal_equations(energy == EnergyKind::Gradient ? assemble_gradient(grid, set)
                                                           : assemble_laplacian(grid, set));
}

}  // namespace

TEST_CASE("densify copies entries exactly and rejects rectangles") {
    SparseMatrix id(3, 3);
    for (int i = 0; i < 3; ++i) id.add(i, i, 1.0);
    const DenseMatrix d = densify(id);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(d.at(i, j) == (i == j ? 1.0 : 0.0));

    const DenseMatrix zero = densify(SparseMatrix(2, 2));
    CHECK(zero.at(0, 0) == 0.0);
    CHECK(zero.at(1, 1) == 0.0);

    CHECK_THROWS_AS(densify(SparseMatrix(2, 3)), DomainError);

    const auto normal = make_normal(GridSpec::line(5), EnergyKind::Gradient,
                                    {{0, 2.0}, {4, 6.0}});
    const DenseMatrix m = densify(normal.M);
    CHECK(m.at(1, 1) == 2.0);
    CHECK(m.at(1, 2) == -1.0);
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 0.0);
}

TEST_CASE("dense_solve examples") {
    DenseMatrix id(3);
    for (int i = 0; i < 3; ++i) id.at(i, i) = 1.0;
    CHECK(dense_solve(id, std::vector<double>{3, -1, 2}).x ==
          std::vector<double>{3, -1, 2});

    const auto grad = make_normal(GridSpec::line(5), EnergyKind::Gradient, {{0, 2.0}, {4, 6.0}});
    const auto xg = dense_solve(densify(grad.M), grad.rhs);
    CHECK_FALSE(xg.ill_conditioned);
    for (int i = 0; i < 5; ++i)
        CHECK(xg.x[static_cast<size_t>(i)] == Catch::Approx(2.0 + i).margin(1e-10));

    const auto lap = make_normal(GridSpec::line(5), EnergyKind::Laplacian, {{0, 2.0}, {4, 6.0}});
    const auto xl = dense_solve(densify(lap.M), lap.rhs);
    for (int i = 0; i < 5; ++i)
        CHECK(xl.x[static_cast<size_t>(i)] == Catch::Approx(2.0 + i).margin(1e-10));
}

TEST_CASE("dense_solve rejects singular matrices") {
    DenseMatrix m(2);
    m.at(0, 0) = 1.0;
    m.at(0, 1) = 2.0;
    m.at(1, 0) = 2.0;
    m.at(1, 1) = 4.0;
    CHECK_THROWS_AS(dense_solve(m, std::vector<double>{1, 2}), DomainError);
    CHECK_THROWS_AS(dense_solve(m, std::vector<double>{1}), DomainError);
}

TEST_CASE("oracle recovers random vectors through M y") {
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    struct Case {
        GridSpec grid;
        EnergyKind energy;
        std::vector<Constraint> cons;
    };
    const GridSpec sq = GridSpec::square(9);
    const std::vector<Case> cases = {
        {GridSpec::line(40), EnergyKind::Gradient, {{0, 2.0}, {39, 6.0}}},
        {GridSpec::line(12), EnergyKind::Laplacian, {{0, 2.0}, {11, 6.0}}},
        {sq, EnergyKind::Gradient,
         {{vertex_index(sq, 0, 0), 1.0}, {vertex_index(sq, 8, 8), 2.0}}},
    };
    for (const auto& tc : cases) {
        const NormalSystem sys = make_normal(tc.grid, tc.energy, tc.cons);
        const DenseMatrix M = densify(sys.M);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> y(static_cast<size_t>(sys.order()));
            for (double& v : y) v = val(rng);
            const auto my = sys.M.multiply(y);
            const auto back = dense_solve(M, my).x;
            for (size_t i = 0; i < y.size(); ++i)
                CHECK(back[i] == Catch::Approx(y[i]).margin(1e-8));
        }
    }
}

TEST_CASE("eigendecomposition reproduces known spectra") {
    // diag(3, 1, 2) with no coupling
    DenseMatrix d(3);
    d.at(0, 0) = 3.0;
    d.at(1, 1) = 1.0;
    d.at(2, 2) = 2.0;
    const auto eig = symmetric_eigen(d);
    CHECK(eig.values[0] == Catch::Approx(1.0));
    CHECK(eig.values[1] == Catch::Approx(2.0));
    CHECK(eig.values[2] == Catch::Approx(3.0));

    // tridiagonal (-1, 2, -1) of order 3: 2 - sqrt(2), 2, 2 + sqrt(2)
    DenseMatrix t(3);
    for (int i = 0; i < 3; ++i) t.at(i, i) = 2.0;
    t.at(0, 1) = t.at(1, 0) = t.at(1, 2) = t.at(2, 1) = -1.0;
    const auto et = symmetric_eigen(t);
    CHECK(et.values[0] == Catch::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(et.values[1] == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(et.values[2] == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("eigenpairs satisfy M v = lambda v and the trace identity") {
    struct Case {
        GridSpec grid;
        EnergyKind energy;
        std::vector<Constraint> cons;
    };
    const GridSpec sq = GridSpec::square(8);
    const std::vector<Case> cases = {
        {GridSpec::line(30), EnergyKind::Gradient, {{0, 2.0}, {29, 6.0}}},
        {GridSpec::line(15), EnergyKind::Laplacian, {{0, 2.0}, {14, 6.0}}},
        {sq, EnergyKind::Gradient,
         {{vertex_index(sq, 0, 0), 0.0}, {vertex_index(sq, 7, 7), 0.0},
          {vertex_index(sq, 4, 4), 1.0}}},
    };
    for (const auto& tc : cases) {
        const DenseMatrix M = densify(make_normal(tc.grid, tc.energy, tc.cons).M);
        const int n = M.order();
        const auto eig = symmetric_eigen(M);
        const double scale = M.frobenius_norm();

        double trace = 0.0, eigsum = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += M.at(i, i);
            eigsum += eig.values[static_cast<size_t>(i)];
        }
        CHECK(trace == Catch::Approx(eigsum).epsilon(1e-9));

        for (int k = 0; k < n; ++k) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                double mv = 0.0;
                for (int j = 0; j < n; ++j) mv += M.at(i, j) * eig.vectors.at(j, k);
                worst = std::max(std::abs(mv - eig.values[static_cast<size_t>(k)] *
                                                   eig.vectors.at(i, k)),
                                 worst);
            }
            CHECK(worst <= 1e-9 * scale);
        }
        // PSD: nothing meaningfully below zero
        for (double v : eig.values) CHECK(v >= -1e-9 * eig.values.back());
    }
}

TEST_CASE("condition numbers of the locked-line systems") {
    auto kappa = [](EnergyKind e, int n) {
        const auto sys = make_normal(GridSpec::line(n), e, {{0, 2.0}, {n - 1, 6.0}});
        return condition_number(densify(sys.M));
    };
    DenseMatrix id(4);
    for (int i = 0; i < 4; ++i) id.at(i, i) = 1.0;
    CHECK(condition_number(id).condition_number == Catch::Approx(1.0));

    // closed forms for the locked line: 3 + 2*sqrt(2) for the gradient energy
    // and its square for the laplacian energy
    const auto g5 = kappa(EnergyKind::Gradient, 5);
    CHECK(g5.condition_number == Catch::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(g5.near_null_dimension == 0);
    const auto l5 = kappa(EnergyKind::Laplacian, 5);
    CHECK(l5.condition_number ==
          Catch::Approx((3.0 + 2.0 * std::sqrt(2.0)) * (3.0 + 2.0 * std::sqrt(2.0)))
              .epsilon(1e-9));

    // growth: ~n^2 for the gradient energy, ~n^4 for the laplacian energy
    const double g50 = kappa(EnergyKind::Gradient, 50).condition_number;
    CHECK(g50 >= 900.0);
    CHECK(g50 <= 1100.0);
    const double l50 = kappa(EnergyKind::Laplacian, 50).condition_number;
    CHECK(l50 >= 8.0e5);
    CHECK(l50 <= 1.05e6);
}

TEST_CASE("condition_number flags near-null directions and asymmetry") {
    DenseMatrix m(3);
    m.at(0, 0) = 4.0;
    m.at(1, 1) = 1e-15;
    m.at(2, 2) = 2.0;
    const auto s = condition_number(m);
    CHECK(s.near_null_dimension == 1);
    CHECK(s.lambda_min_nonzero == Catch::Approx(2.0));
    CHECK(s.condition_number == Catch::Approx(2.0));

    DenseMatrix bad(2);
    bad.at(0, 1) = 1.0;
    bad.at(1, 0) = 0.5;
    bad.at(0, 0) = bad.at(1, 1) = 1.0;
    CHECK_THROWS_AS(condition_number(bad), DomainError);
}

TEST_CASE("support_front thresholds magnitudes") {
    CHECK(support_front(std::vector<double>{0, 0, 0}, 1e-14).empty());
    CHECK(support_front(std::vector<double>{1e-20, 1.0}, 1e-14) == std::vector<VertexId>{1});
    CHECK_THROWS_AS(support_front(std::vector<double>{1.0}, 0.0), DomainError);

    // one Jacobi step from zero has the support of rhs / diagonal
    const auto sys = make_normal(GridSpec::line(5), EnergyKind::Gradient, {{0, 2.0}, {4, 6.0}});
    std::vector<double> x(5);
    for (int v = 0; v < 5; ++v)
        x[static_cast<size_t>(v)] = sys.rhs[static_cast<size_t>(v)] / sys.M.at(v, v);
    CHECK(support_front(x, 1e-14) == std::vector<VertexId>{0, 1, 3, 4});
}
