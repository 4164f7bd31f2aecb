#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridsolve/errors.hpp"

namespace gridsolve {

/// One stored coefficient of a sparse row.
struct SparseEntry {
    int col;
    double value;

    bool operator==(const SparseEntry&) const = default;
};

/// Row-wise sparse matrix. Within each row the column indices are strictly
/// increasing and no explicit zeros are stored.
class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw DomainError("SparseMatrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Adds coef to entry (r, c); entries that become exactly zero are removed.
    void add(int r, int c, double coef) {
        check_index(r, c);
        auto& row = data_[static_cast<size_t>(r)];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const SparseEntry& e, int col) { return e.col < col; });
        if (it != row.end() && it->col == c) {
            it->value += coef;
            if (it->value == 0.0) row.erase(it);
        } else if (coef != 0.0) {
            row.insert(it, SparseEntry{c, coef});
        }
    }

    /// Stored value at (r, c); absent entries read as 0.
    double at(int r, int c) const {
        check_index(r, c);
        const auto& row = data_[static_cast<size_t>(r)];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const SparseEntry& e, int col) { return e.col < col; });
        return (it != row.end() && it->col == c) ? it->value : 0.0;
    }

    std::span<const SparseEntry> row(int r) const {
        if (r < 0 || r >= rows_)
            throw DomainError("SparseMatrix: row " + std::to_string(r) + " out of range");
        return data_[static_cast<size_t>(r)];
    }

    std::size_t nonzero_count() const {
        std::size_t nnz = 0;
        for (const auto& row : data_) nnz += row.size();
        return nnz;
    }

    /// y = A x.
    std::vector<double> multiply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != cols_)
            throw DomainError("SparseMatrix::multiply: vector length " +
                              std::to_string(x.size()) + " != columns " + std::to_string(cols_));
        std::vector<double> y(static_cast<size_t>(rows_), 0.0);
        for (int r = 0; r < rows_; ++r) {
            double s = 0.0;
            for (const auto& e : data_[static_cast<size_t>(r)])
                s += e.value * x[static_cast<size_t>(e.col)];
            y[static_cast<size_t>(r)] = s;
        }
        return y;
    }

    /// Bitwise-equal mirrored coefficients on a square matrix.
    bool is_structurally_symmetric() const {
        if (rows_ != cols_) return false;
        for (int r = 0; r < rows_; ++r)
            for (const auto& e : data_[static_cast<size_t>(r)])
                if (at(e.col, r) != e.value) return false;
        return true;
    }

    bool operator==(const SparseMatrix&) const = default;

private:
    void check_index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw DomainError("SparseMatrix: index (" + std::to_string(r) + ", " +
                              std::to_string(c) + ") out of bounds " + std::to_string(rows_) +
                              "x" + std::to_string(cols_));
    }

    int rows_;
    int cols_;
    std::vector<std::vector<SparseEntry>> data_;
};

/// 2-norm of a vector.
inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace gridsolve
