#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "gridsolve/errors.hpp"

namespace gridsolve {

/// Flat vertex index in [0, N). In 2D the vertex at row i, column j is n*i + j.
using VertexId = int;

enum class GridDim { OneD, TwoD };

/// Regular 1D or 2D grid of side length n. 2D grids are square.
/// Immutable after construction; safe to share across threads.
struct GridSpec {
    GridDim dim;
    int n;

    static GridSpec line(int n) { return validated({GridDim::OneD, n}); }
    static GridSpec square(int n) { return validated({GridDim::TwoD, n}); }

    int vertex_count() const { return dim == GridDim::OneD ? n : n * n; }
    bool is_2d() const { return dim == GridDim::TwoD; }

    bool operator==(const GridSpec&) const = default;

private:
    static GridSpec validated(GridSpec g) {
        if (g.n < 3)
            throw DomainError("grid side length must be at least 3, got " +
                              std::to_string(g.n));
        return g;
    }
};

/// Flat index of the vertex at row i, column j (j must be 0 in 1D).
inline VertexId vertex_index(const GridSpec& grid, int i, int j) {
    if (grid.dim == GridDim::OneD) {
        if (j != 0)
            throw DomainError("1D grid: column index must be 0, got j=" + std::to_string(j));
        if (i < 0 || i >= grid.n)
            throw DomainError("1D grid: row index i=" + std::to_string(i) +
                              " out of range [0, " + std::to_string(grid.n) + ")");
        return i;
    }
    if (i < 0 || i >= grid.n)
        throw DomainError("2D grid: row index i=" + std::to_string(i) + " out of range [0, " +
                          std::to_string(grid.n) + ")");
    if (j < 0 || j >= grid.n)
        throw DomainError("2D grid: column index j=" + std::to_string(j) +
                          " out of range [0, " + std::to_string(grid.n) + ")");
    return grid.n * i + j;
}

/// (row, column) of a flat vertex index; column is 0 in 1D.
inline std::pair<int, int> vertex_coords(const GridSpec& grid, VertexId v) {
    if (v < 0 || v >= grid.vertex_count())
        throw DomainError("vertex " + std::to_string(v) + " out of range [0, " +
                          std::to_string(grid.vertex_count()) + ")");
    if (grid.dim == GridDim::OneD) return {v, 0};
    return {v / grid.n, v % grid.n};
}

/// Adjacent vertices of v (2-neighborhood in 1D, 4-neighborhood in 2D),
/// clipped at the boundary, sorted ascending.
inline std::vector<VertexId> neighbors(const GridSpec& grid, VertexId v) {
    auto [i, j] = vertex_coords(grid, v);
    std::vector<VertexId> out;
    if (grid.dim == GridDim::OneD) {
        if (i > 0) out.push_back(v - 1);
        if (i < grid.n - 1) out.push_back(v + 1);
        return out;
    }
    if (i > 0) out.push_back(v - grid.n);
    if (j > 0) out.push_back(v - 1);
    if (j < grid.n - 1) out.push_back(v + 1);
    if (i < grid.n - 1) out.push_back(v + grid.n);
    return out;
}

/// Breadth-first distance from the nearest source for every vertex.
/// Distance is 0 exactly on the sources; the grid is connected so every
/// vertex gets a finite distance.
inline std::vector<int> graph_distance(const GridSpec& grid,
                                       const std::vector<VertexId>& sources) {
    if (sources.empty()) throw DomainError("graph_distance: sources must be nonempty");
    const int N = grid.vertex_count();
    std::vector<int> dist(N, -1);
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
        if (s < 0 || s >= N)
            throw DomainError("graph_distance: source vertex " + std::to_string(s) +
                              " out of range");
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (VertexId w : neighbors(grid, u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

}  // namespace gridsolve
