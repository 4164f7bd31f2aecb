#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridsolve/errors.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/sparse.hpp"

namespace gridsolve {

enum class EnergyKind { Gradient, Laplacian };

inline const char* to_string(EnergyKind k) {
    return k == EnergyKind::Gradient ? "gradient" : "laplacian";
}

/// A locked vertex value.
struct Constraint {
    VertexId vertex;
    double value;

    bool operator==(const Constraint&) const = default;
};

/// Ordered list of constraints on distinct vertices.
class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<Constraint> constraints)
        : constraints_(std::move(constraints)) {
        for (size_t a = 0; a < constraints_.size(); ++a)
            for (size_t b = a + 1; b < constraints_.size(); ++b)
                if (constraints_[a].vertex == constraints_[b].vertex)
                    throw DomainError("duplicate constraint on vertex " +
                                      std::to_string(constraints_[a].vertex));
    }

    bool empty() const { return constraints_.empty(); }
    size_t size() const { return constraints_.size(); }
    auto begin() const { return constraints_.begin(); }
    auto end() const { return constraints_.end(); }

    std::optional<double> value_of(VertexId v) const {
        for (const auto& c : constraints_)
            if (c.vertex == v) return c.value;
        return std::nullopt;
    }

    bool operator==(const ConstraintSet&) const = default;

private:
    std::vector<Constraint> constraints_;
};

/// Rectangular system A x = b: objective rows (one per energy term, with
/// constrained coefficients folded into b) followed by one unit row per
/// constraint.
struct LeastSquaresSystem {
    SparseMatrix A;
    std::vector<double> b;
    ConstraintSet constraints;
    GridSpec grid;
    EnergyKind energy;
    int objective_rows = 0;
    std::vector<std::string> warnings;
};

/// Square symmetric system M x = rhs with M = A^T A and rhs = A^T b.
struct NormalSystem {
    SparseMatrix M;
    std::vector<double> rhs;

    int order() const { return M.rows(); }
};

namespace detail {

/// Pending objective row before folding: (column, coefficient) pairs.
using StencilRow = std::vector<std::pair<int, double>>;

struct RowAccumulator {
    std::vector<StencilRow> rows;
    std::vector<double> b;

    /// Folds constrained coefficients into the right-hand side and keeps the
    /// row unless it became entirely zero with zero RHS.
    void add_folded(const StencilRow& stencil, const ConstraintSet& constraints) {
        StencilRow kept;
        double rhs = 0.0;
        for (const auto& [col, coef] : stencil) {
            if (auto value = constraints.value_of(col))
                rhs -= coef * *value;
            else
                kept.emplace_back(col, coef);
        }
        if (kept.empty() && rhs == 0.0) return;
        rows.push_back(std::move(kept));
        b.push_back(rhs);
    }
};

inline LeastSquaresSystem finish_system(const GridSpec& grid, EnergyKind energy,
                                        const ConstraintSet& constraints,
                                        RowAccumulator&& acc,
                                        std::vector<std::string> warnings) {
    const int objective_rows = static_cast<int>(acc.rows.size());
    const int total_rows = objective_rows + static_cast<int>(constraints.size());
    SparseMatrix A(total_rows, grid.vertex_count());
    for (int r = 0; r < objective_rows; ++r)
        for (const auto& [col, coef] : acc.rows[static_cast<size_t>(r)]) A.add(r, col, coef);
    int r = objective_rows;
    for (const auto& c : constraints) {
        A.add(r, c.vertex, 1.0);
        acc.b.push_back(c.value);
        ++r;
    }
    return LeastSquaresSystem{std::move(A),  std::move(acc.b), constraints,
                              grid,          energy,           objective_rows,
                              std::move(warnings)};
}

inline void check_constraints(const GridSpec& grid, const ConstraintSet& constraints) {
    if (constraints.empty())
        throw DomainError("at least one constraint is required (singular system otherwise)");
    for (const auto& c : constraints)
        if (c.vertex < 0 || c.vertex >= grid.vertex_count())
            throw DomainError("constraint on vertex " + std::to_string(c.vertex) +
                              " out of range [0, " + std::to_string(grid.vertex_count()) + ")");
}

}  // namespace detail

/// Builds the gradient-energy least-squares system: one row per grid edge
/// with +1 on the lower-index endpoint and -1 on the higher, constraints
/// folded into b. For 2D grids the horizontal edges come first in row-major
/// order, then the vertical edges.
inline LeastSquaresSystem assemble_gradient(const GridSpec& grid,
                                            const ConstraintSet& constraints) {
    detail::check_constraints(grid, constraints);
    detail::RowAccumulator acc;
    if (grid.dim == GridDim::OneD) {
        for (int i = 0; i + 1 < grid.n; ++i)
            acc.add_folded({{i, 1.0}, {i + 1, -1.0}}, constraints);
    } else {
        const int n = grid.n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j + 1 < n; ++j)
                acc.add_folded({{n * i + j, 1.0}, {n * i + j + 1, -1.0}}, constraints);
        for (int i = 0; i + 1 < n; ++i)
            for (int j = 0; j < n; ++j)
                acc.add_folded({{n * i + j, 1.0}, {n * (i + 1) + j, -1.0}}, constraints);
    }
    return detail::finish_system(grid, EnergyKind::Gradient, constraints, std::move(acc), {});
}

/// Builds the Laplacian-energy least-squares system with the integer stencil
/// (-1, 2, -1). 1D: one row per interior vertex. 2D: interior vertices get a
/// horizontal and a vertical stencil row; boundary non-corner vertices get
/// the single stencil along their boundary line; corners contribute no row.
/// Rows are emitted vertex by vertex in row-major order, horizontal before
/// vertical.
inline LeastSquaresSystem assemble_laplacian(const GridSpec& grid,
                                             const ConstraintSet& constraints) {
    detail::check_constraints(grid, constraints);
    std::vector<std::string> warnings;
    detail::RowAccumulator acc;
    if (grid.dim == GridDim::OneD) {
        if (constraints.size() < 2)
            warnings.push_back(
                "fewer than 2 constraints: the Laplacian energy vanishes on linear "
                "functions, so the normal matrix is only positive semidefinite");
        for (int i = 1; i + 1 < grid.n; ++i)
            acc.add_folded({{i - 1, -1.0}, {i, 2.0}, {i + 1, -1.0}}, constraints);
    } else {
        if (constraints.size() < 4)
            warnings.push_back(
                "fewer than 4 constraints: the 2D Laplacian energy vanishes on bilinear "
                "functions (1, i, j, i*j), so the normal matrix is singular");
        const int n = grid.n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const int v = n * i + j;
                if (j > 0 && j + 1 < n)
                    acc.add_folded({{v - 1, -1.0}, {v, 2.0}, {v + 1, -1.0}}, constraints);
                if (i > 0 && i + 1 < n)
                    acc.add_folded({{v - n, -1.0}, {v, 2.0}, {v + n, -1.0}}, constraints);
            }
        }
    }
    return detail::finish_system(grid, EnergyKind::Laplacian, constraints, std::move(acc),
                                 std::move(warnings));
}

/// Forms M = A^T A and rhs = A^T b by row-outer-product accumulation in
/// ascending row order. Only the upper triangle is accumulated; the lower
/// one is mirrored bit-exactly.
inline NormalSystem normal_equations(const LeastSquaresSystem& sys) {
    const int N = sys.A.cols();
    std::vector<double> upper(static_cast<size_t>(N) * static_cast<size_t>(N), 0.0);
    std::vector<double> rhs(static_cast<size_t>(N), 0.0);
    for (int r = 0; r < sys.A.rows(); ++r) {
        const auto row = sys.A.row(r);
        const double br = sys.b[static_cast<size_t>(r)];
        for (const auto& eu : row) {
            rhs[static_cast<size_t>(eu.col)] += eu.value * br;
            for (const auto& ew : row)
                if (ew.col >= eu.col)
                    upper[static_cast<size_t>(eu.col) * N + ew.col] += eu.value * ew.value;
        }
    }
    SparseMatrix M(N, N);
    for (int u = 0; u < N; ++u) {
        for (int w = u; w < N; ++w) {
            const double value = upper[static_cast<size_t>(u) * N + w];
            if (value != 0.0) {
                M.add(u, w, value);
                if (w != u) M.add(w, u, value);
            }
        }
    }
    return NormalSystem{std::move(M), std::move(rhs)};
}

/// Evaluates the energy sum directly from a value vector, independent of any
/// assembled matrix. The Laplacian form is (x_v - mean of the two stencil
/// neighbors)^2 per stencil instance, i.e. 1/4 of the squared (-1, 2, -1)
/// row value.
inline double energy_value(const GridSpec& grid, EnergyKind kind, std::span<const double> x) {
    const int N = grid.vertex_count();
    if (static_cast<int>(x.size()) != N)
        throw DomainError("energy_value: vector length " + std::to_string(x.size()) +
                          " != vertex count " + std::to_string(N));
    double e = 0.0;
    auto sq = [](double d) { return d * d; };
    if (kind == EnergyKind::Gradient) {
        if (grid.dim == GridDim::OneD) {
            for (int i = 0; i + 1 < grid.n; ++i) e += sq(x[i] - x[i + 1]);
        } else {
            const int n = grid.n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j + 1 < n; ++j) e += sq(x[n * i + j] - x[n * i + j + 1]);
            for (int i = 0; i + 1 < n; ++i)
                for (int j = 0; j < n; ++j) e += sq(x[n * i + j] - x[n * (i + 1) + j]);
        }
        return e;
    }
    if (grid.dim == GridDim::OneD) {
        for (int i = 1; i + 1 < grid.n; ++i) e += sq(x[i] - 0.5 * x[i - 1] - 0.5 * x[i + 1]);
    } else {
        const int n = grid.n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const int v = n * i + j;
                if (j > 0 && j + 1 < n) e += sq(x[v] - 0.5 * x[v - 1] - 0.5 * x[v + 1]);
                if (i > 0 && i + 1 < n) e += sq(x[v] - 0.5 * x[v - n] - 0.5 * x[v + n]);
            }
        }
    }
    return e;
}

}  // namespace gridsolve
