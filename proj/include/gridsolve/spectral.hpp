#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gridsolve/errors.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/sparse.hpp"

namespace gridsolve {

/// Row-major square dense matrix, the oracle-side mirror of NormalSystem.
class DenseMatrix {
public:
    explicit DenseMatrix(int order) : order_(order) {
        if (order < 1) throw DomainError("DenseMatrix: order must be >= 1");
        data_.assign(static_cast<size_t>(order) * static_cast<size_t>(order), 0.0);
    }

    int order() const { return order_; }
    double& at(int i, int j) { return data_[static_cast<size_t>(i) * order_ + j]; }
    double at(int i, int j) const { return data_[static_cast<size_t>(i) * order_ + j]; }
    std::span<const double> entries() const { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

private:
    int order_;
    std::vector<double> data_;
};

/// Exact entrywise copy of a square sparse matrix.
inline DenseMatrix densify(const SparseMatrix& M) {
    if (M.rows() != M.cols())
        throw DomainError("densify: matrix is " + std::to_string(M.rows()) + "x" +
                          std::to_string(M.cols()) + ", expected square");
    DenseMatrix D(M.rows());
    for (int r = 0; r < M.rows(); ++r)
        for (const auto& e : M.row(r)) D.at(r, e.col) = e.value;
    return D;
}

/// Direct solution with a residual-quality flag.
struct DenseSolution {
    std::vector<double> x;
    bool ill_conditioned = false;  // set when ||Mx - rhs|| > 1e-9 * (1 + ||rhs||)
};

/// Gaussian elimination with partial pivoting. Throws on a pivot smaller
/// than 1e-12 times the largest input entry.
inline DenseSolution dense_solve(const DenseMatrix& M, std::span<const double> rhs) {
    const int n = M.order();
    if (static_cast<int>(rhs.size()) != n)
        throw DomainError("dense_solve: rhs length " + std::to_string(rhs.size()) +
                          " != order " + std::to_string(n));
    const double pivot_floor = 1e-12 * M.max_abs();

    std::vector<double> a(M.entries().begin(), M.entries().end());
    std::vector<double> b(rhs.begin(), rhs.end());
    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > pivot) {
                pivot = std::abs(A(i, k));
                pivot_row = i;
            }
        }
        if (pivot < pivot_floor || pivot == 0.0)
            throw DomainError("dense_solve: singular matrix (pivot " + std::to_string(pivot) +
                              " at column " + std::to_string(k) + ")");
        if (pivot_row != k) {
            for (int j = k; j < n; ++j) std::swap(A(k, j), A(pivot_row, j));
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(pivot_row)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            if (f == 0.0) continue;
            A(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = s / A(i, i);
    }

    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        double mx = 0.0;
        for (int j = 0; j < n; ++j) mx += M.at(i, j) * x[static_cast<size_t>(j)];
        const double d = rhs[static_cast<size_t>(i)] - mx;
        rnorm += d * d;
        bnorm += rhs[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i)];
    }
    DenseSolution out{std::move(x), false};
    out.ill_conditioned = std::sqrt(rnorm) > 1e-9 * (1.0 + std::sqrt(bnorm));
    return out;
}

/// Full symmetric eigendecomposition: eigenvalues ascending, matching
/// eigenvectors as columns of `vectors`.
struct EigenDecomposition {
    std::vector<double> values;
    DenseMatrix vectors;
};

/// Cyclic Jacobi rotations; sweeps until the off-diagonal Frobenius norm
/// drops below 1e-12 times the matrix norm.
inline EigenDecomposition symmetric_eigen(const DenseMatrix& M) {
    const int n = M.order();
    DenseMatrix A = M;
    DenseMatrix V(n);
    for (int i = 0; i < n; ++i) V.at(i, i) = 1.0;

    const double target = 1e-12 * M.frobenius_norm();
    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * A.at(i, j) * A.at(i, j);
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > target; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = A.at(p, p), aqq = A.at(q, q);
                A.at(p, p) = app - t * apq;
                A.at(q, q) = aqq + t * apq;
                A.at(p, q) = 0.0;
                A.at(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        const double aip = A.at(i, p), aiq = A.at(i, q);
                        A.at(i, p) = c * aip - s * aiq;
                        A.at(p, i) = A.at(i, p);
                        A.at(i, q) = s * aip + c * aiq;
                        A.at(q, i) = A.at(i, q);
                    }
                    const double vip = V.at(i, p), viq = V.at(i, q);
                    V.at(i, p) = c * vip - s * viq;
                    V.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return A.at(a, a) < A.at(b, b); });
    EigenDecomposition out{std::vector<double>(static_cast<size_t>(n)), DenseMatrix(n)};
    for (int k = 0; k < n; ++k) {
        out.values[static_cast<size_t>(k)] = A.at(order[static_cast<size_t>(k)],
                                                  order[static_cast<size_t>(k)]);
        for (int i = 0; i < n; ++i)
            out.vectors.at(i, k) = V.at(i, order[static_cast<size_t>(k)]);
    }
    return out;
}

/// Spectral condition number of a symmetric PSD matrix. Eigenvalues below
/// 1e-12 * lambda_max count as near-null and are excluded from the ratio.
struct SpectrumSummary {
    double lambda_max = 0.0;
    double lambda_min_nonzero = 0.0;
    double condition_number = 0.0;
    int near_null_dimension = 0;
};

inline SpectrumSummary condition_number(const DenseMatrix& M) {
    const int n = M.order();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(M.at(i, j) - M.at(j, i)) > 1e-12)
                throw DomainError("condition_number: matrix is not symmetric at (" +
                                  std::to_string(i) + ", " + std::to_string(j) + ")");
    const EigenDecomposition eig = symmetric_eigen(M);
    const double lmax = eig.values.back();
    if (!(lmax > 0.0))
        throw DomainError("condition_number: matrix has no positive eigenvalue");
    const double floor = 1e-12 * lmax;
    SpectrumSummary out;
    out.lambda_max = lmax;
    out.lambda_min_nonzero = lmax;
    for (double v : eig.values) {
        if (v <= floor)
            ++out.near_null_dimension;
        else
            out.lambda_min_nonzero = std::min(out.lambda_min_nonzero, v);
    }
    out.condition_number = lmax / out.lambda_min_nonzero;
    return out;
}

/// Vertices whose value exceeds eps in magnitude, ascending.
inline std::vector<VertexId> support_front(std::span<const double> x, double eps) {
    if (!(eps > 0.0)) throw DomainError("support_front: eps must be positive");
    std::vector<VertexId> out;
    for (size_t v = 0; v < x.size(); ++v)
        if (std::abs(x[v]) > eps) out.push_back(static_cast<VertexId>(v));
    return out;
}

}  // namespace gridsolve
