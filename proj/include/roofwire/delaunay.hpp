#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "roofwire/point_cloud.hpp"

namespace roofwire {

inline constexpr std::size_t kNoFace = std::numeric_limits<std::size_t>::max();

struct Edge {
    std::size_t u = 0;  // u < v
    std::size_t v = 0;

    std::size_t other(std::size_t w) const { return w == u ? v : u; }
    auto operator<=>(const Edge&) const = default;
};

// Lifted 2.5D Delaunay triangulation: Delaunay in (x, y), z carried along.
//
// Vertex ids are dense and ordered by the cloud index of the surviving point, so a
// cloud without merged duplicates has vertex v == cloud point v.
struct DelaunayGraph {
    std::vector<Vec3> vertices;             // lifted positions
    std::vector<std::size_t> source_index;  // vertex -> cloud index
    std::vector<std::size_t> vertex_of_point;  // cloud index -> vertex (after merging)

    std::vector<Edge> edges;                              // sorted by (u, v)
    std::vector<std::array<std::size_t, 3>> faces;        // counter-clockwise in (x, y)
    std::vector<std::array<std::size_t, 2>> edge_faces;   // kNoFace marks a missing side
    std::vector<std::array<std::size_t, 3>> face_edges;   // edge of (f[i], f[i+1])
    std::vector<std::vector<std::size_t>> vertex_edges;   // sorted by neighbour id

    std::size_t vertex_count() const noexcept { return vertices.size(); }
    std::size_t face_count_of(std::size_t e) const {
        return (edge_faces[e][0] != kNoFace) + (edge_faces[e][1] != kNoFace);
    }
    bool is_boundary(std::size_t e) const { return face_count_of(e) < 2; }
    std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;
};

// Points whose (x, y) lie within xy_epsilon of each other are merged, keeping the
// one with the largest z (ties: lowest cloud index). Cocircular ties resolve towards
// the diagonal incident to the lowest vertex id. Throws TriangulationError when
// fewer than 3 distinct points remain or every projection is collinear.
DelaunayGraph triangulate(const PointCloud& cloud, double xy_epsilon = 1e-9);

// Edges with fewer than two adjacent faces.
std::vector<std::size_t> boundary_edges(const DelaunayGraph& graph);

// Debug dump as an OBJ triangle mesh (v/f records).
void write_obj_mesh(const DelaunayGraph& graph, std::ostream& out);

}  // namespace roofwire
