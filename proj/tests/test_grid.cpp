#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "gridsolve/grid.hpp"

using namespace gridsolve;

TEST_CASE("vertex_index flattens row-major") {
    const GridSpec g2 = GridSpec::square(5);
    CHECK(vertex_index(g2, 0, 0) == 0);
    CHECK(vertex_index(g2, 1, 2) == 7);
    CHECK(vertex_index(g2, 4, 4) == 24);

    const GridSpec g1 = GridSpec::line(20);
    CHECK(vertex_index(g1, 19, 0) == 19);
    CHECK(vertex_index(g1, 0, 0) == 0);
}

TEST_CASE("vertex_index rejects out-of-range coordinates") {
    const GridSpec g2 = GridSpec::square(5);
    CHECK_THROWS_AS(vertex_index(g2, 5, 0), DomainError);
    CHECK_THROWS_AS(vertex_index(g2, 0, -1), DomainError);
    CHECK_THROWS_AS(vertex_index(GridSpec::line(5), 1, 1), DomainError);
    CHECK_THROWS_WITH(vertex_index(g2, 0, 9), Catch::Matchers::ContainsSubstring("j=9"));
}

TEST_CASE("grids smaller than 3 are rejected") {
    CHECK_THROWS_AS(GridSpec::line(2), DomainError);
    CHECK_THROWS_AS(GridSpec::square(0), DomainError);
}

TEST_CASE("neighbors of line and square vertices") {
    const GridSpec g1 = GridSpec::line(5);
    CHECK(neighbors(g1, 0) == std::vector<VertexId>{1});
    CHECK(neighbors(g1, 2) == std::vector<VertexId>{1, 3});
    CHECK(neighbors(g1, 4) == std::vector<VertexId>{3});

    const GridSpec g2 = GridSpec::square(5);
    CHECK(neighbors(g2, 12) == std::vector<VertexId>{7, 11, 13, 17});
    CHECK(neighbors(g2, 0) == std::vector<VertexId>{1, 5});

    CHECK_THROWS_AS(neighbors(g1, 5), DomainError);
}

TEST_CASE("neighbor lists are symmetric, sorted and correctly sized") {
    for (int n = 3; n <= 10; ++n) {
        for (const GridSpec g : {GridSpec::line(n), GridSpec::square(n)}) {
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                const auto nv = neighbors(g, v);
                CHECK(std::is_sorted(nv.begin(), nv.end()));
                if (g.is_2d()) {
                    CHECK(nv.size() >= 2);
                    CHECK(nv.size() <= 4);
                } else {
                    CHECK(nv.size() >= 1);
                    CHECK(nv.size() <= 2);
                }
                for (VertexId u : nv) {
                    const auto nu = neighbors(g, u);
                    CHECK(std::find(nu.begin(), nu.end(), v) != nu.end());
                }
            }
        }
    }
}

TEST_CASE("graph_distance examples on the 5-line") {
    const GridSpec g = GridSpec::line(5);
    CHECK(graph_distance(g, {0}) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(graph_distance(g, {0, 4}) == std::vector<int>{0, 1, 2, 1, 0});
}

TEST_CASE("graph_distance from a corner is Manhattan distance") {
    const GridSpec g = GridSpec::square(5);
    const auto dist = graph_distance(g, {0});
    CHECK(dist[24] == 8);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const auto [i, j] = vertex_coords(g, v);
        CHECK(dist[v] == i + j);
    }
}

TEST_CASE("graph_distance changes by at most one along any edge") {
    for (const GridSpec g : {GridSpec::line(9), GridSpec::square(7)}) {
        const auto dist = graph_distance(g, {0, g.vertex_count() - 1});
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            for (VertexId u : neighbors(g, v))
                CHECK(std::abs(dist[u] - dist[v]) <= 1);
    }
}

TEST_CASE("graph_distance requires sources") {
    CHECK_THROWS_AS(graph_distance(GridSpec::line(5), {}), DomainError);
    CHECK_THROWS_AS(graph_distance(GridSpec::line(5), {7}), DomainError);
}
