#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "roofwire/delaunay.hpp"
#include "roofwire/error.hpp"

using namespace roofwire;

namespace {

PointCloud cloud_of(std::initializer_list<Vec3> pts) {
    PointCloud c;
    c.points.assign(pts.begin(), pts.end());
    return c;
}

void check_structure(const DelaunayGraph& g) {
    const auto V = static_cast<long>(g.vertex_count());
    const auto E = static_cast<long>(g.edges.size());
    const auto F = static_cast<long>(g.faces.size());
    CHECK(V - E + F == 1);
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        CHECK(g.edges[e].u < g.edges[e].v);
        CHECK(g.face_count_of(e) >= 1);
    }
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        const auto& t = g.faces[f];
        CHECK(oracle::cross2(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]]) > 0);
        for (int i = 0; i < 3; ++i) {
            const auto e = g.edge_between(t[i], t[(i + 1) % 3]);
            REQUIRE(e.has_value());
            CHECK(g.face_edges[f][i] == *e);
            CHECK((g.edge_faces[*e][0] == f || g.edge_faces[*e][1] == f));
        }
    }
}

}  // namespace

TEST_CASE("single triangle") {
    const DelaunayGraph g = triangulate(cloud_of({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
    CHECK(g.faces.size() == 1);
    CHECK(g.edges.size() == 3);
    for (std::size_t e = 0; e < 3; ++e) CHECK(g.face_count_of(e) == 1);
    CHECK(boundary_edges(g).size() == 3);
    check_structure(g);
}

TEST_CASE("unit square splits into two faces") {
    const DelaunayGraph g = triangulate(cloud_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}));
    CHECK(g.faces.size() == 2);
    CHECK(g.edges.size() == 5);
    std::size_t interior = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) interior += g.face_count_of(e) == 2;
    CHECK(interior == 1);
    // cocircular: the diagonal goes through the lowest vertex id
    CHECK(g.edge_between(0, 2).has_value());
    CHECK_FALSE(g.edge_between(1, 3).has_value());
    const auto b = boundary_edges(g);
    REQUIRE(b.size() == 4);
    for (std::size_t e : b) CHECK(!(g.edges[e].u == 0 && g.edges[e].v == 2));
    check_structure(g);
}

TEST_CASE("cocircular tie follows the lowest id") {
    const DelaunayGraph g = triangulate(cloud_of({{1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}}));
    CHECK(g.edge_between(0, 2).has_value());
}

TEST_CASE("random clouds satisfy the empty-circumcircle property") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const PointCloud c = oracle::random_cloud(rng, 12);
        const DelaunayGraph g = triangulate(c);
        CHECK(g.vertex_count() == 12);
        CHECK(oracle::circumcircle_violations(g) == 0);
        check_structure(g);
    }
}

TEST_CASE("larger cloud") {
    std::mt19937_64 rng(5);
    const PointCloud c = oracle::random_cloud(rng, 300, -100, 100);
    const DelaunayGraph g = triangulate(c);
    CHECK(oracle::circumcircle_violations(g) == 0);
    check_structure(g);
}

TEST_CASE("boundary edges trace the convex hull") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud c = oracle::random_cloud(rng, 40);
        const DelaunayGraph g = triangulate(c);
        const auto hull = oracle::gift_wrap(g.vertices);
        std::set<Edge> expected;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const std::size_t a = hull[i], b = hull[(i + 1) % hull.size()];
            expected.insert(Edge{std::min(a, b), std::max(a, b)});
        }
        std::set<Edge> got;
        for (std::size_t e : boundary_edges(g)) got.insert(g.edges[e]);
        CHECK(got == expected);
    }
}

TEST_CASE("duplicates merge keeping the highest point") {
    const PointCloud c = cloud_of({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 3}, {1, 1, 0}, {0, 0, 3}});
    const DelaunayGraph g = triangulate(c);
    CHECK(g.vertex_count() == 4);
    const std::size_t v = g.vertex_of_point[0];
    CHECK(g.vertex_of_point[3] == v);
    CHECK(g.vertex_of_point[5] == v);
    CHECK(g.vertices[v].z() == 3.0);
    CHECK(g.source_index[v] == 3);
    check_structure(g);
}

TEST_CASE("near duplicates within xy_epsilon merge") {
    const PointCloud c = cloud_of({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1e-12, 0, 5}});
    CHECK(triangulate(c, 1e-9).vertex_count() == 3);
    CHECK(triangulate(c, 1e-15).vertex_count() == 4);
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(triangulate(cloud_of({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 0}})), TriangulationError);
    CHECK_THROWS_AS(triangulate(cloud_of({{0, 0, 0}, {1, 0, 0}})), TriangulationError);
    CHECK_THROWS_AS(triangulate(cloud_of({{0, 0, 0}, {0, 0, 1}, {0, 0, 2}})), TriangulationError);
    CHECK_THROWS_AS(triangulate(PointCloud{}), TriangulationError);
}

TEST_CASE("collinear points on the hull stay in the triangulation") {
    const DelaunayGraph g = triangulate(cloud_of({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}}));
    CHECK(g.faces.size() == 2);
    CHECK(boundary_edges(g).size() == 4);
    check_structure(g);
}

TEST_CASE("triangulation is deterministic") {
    std::mt19937_64 rng(99);
    const PointCloud c = oracle::random_cloud(rng, 500);
    const DelaunayGraph a = triangulate(c), b = triangulate(c);
    CHECK(a.edges == b.edges);
    CHECK(a.faces == b.faces);
}

TEST_CASE("connectivity is invariant under translation and scaling") {
    std::mt19937_64 rng(41);
    const PointCloud c = oracle::random_cloud(rng, 60);
    PointCloud moved = c;
    for (Vec3& p : moved.points) p = p * 4.0 + Vec3(512, -256, 8);
    const DelaunayGraph a = triangulate(c), b = triangulate(moved);
    CHECK(a.edges == b.edges);
    CHECK(a.faces == b.faces);
}

TEST_CASE("z does not affect connectivity") {
    std::mt19937_64 rng(8);
    const PointCloud c = oracle::random_cloud(rng, 80);
    PointCloud flat = c;
    for (Vec3& p : flat.points) p.z() = 0;
    CHECK(triangulate(c).edges == triangulate(flat).edges);
}

TEST_CASE("vertex_edges lists incident edges by neighbour") {
    std::mt19937_64 rng(2);
    const DelaunayGraph g = triangulate(oracle::random_cloud(rng, 30));
    std::size_t total = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::size_t prev = 0;
        bool first = true;
        for (std::size_t e : g.vertex_edges[v]) {
            const std::size_t w = g.edges[e].other(v);
            CHECK((g.edges[e].u == v || g.edges[e].v == v));
            if (!first) CHECK(w > prev);
            prev = w;
            first = false;
        }
        total += g.vertex_edges[v].size();
    }
    CHECK(total == 2 * g.edges.size());
}

TEST_CASE("mesh dump") {
    const DelaunayGraph g = triangulate(cloud_of({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
    std::ostringstream out;
    write_obj_mesh(g, out);
    CHECK(out.str().find("f 1 2 3") != std::string::npos);
}
