#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "roofwire/delaunay.hpp"

namespace roofwire {

struct ScoringOptions {
    // Average corner scores over interior edges only. Off reproduces the plain mean
    // over all incident edges, where boundary edges contribute pi.
    bool exclude_boundary_edges = false;
    unsigned threads = 1;
};

// Delaunay graph annotated with curvature signatures.
struct ScoredGraph {
    DelaunayGraph graph;
    std::vector<Vec3> face_normals;     // unit, z >= 0
    std::vector<double> edge_angles;    // dihedral angle in [0, pi]; boundary edges = pi
    std::vector<double> corner_scores;  // mean incident edge angle

    std::size_t vertex_count() const noexcept { return graph.vertex_count(); }
};

// Unit normal of (b - a) x (c - a), flipped when it points downward (z < 0).
Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c);

// Angle between two unit normals; the cosine is clamped to [-1, 1].
double dihedral_angle(const Vec3& n1, const Vec3& n2);

ScoredGraph score_graph(DelaunayGraph graph, const ScoringOptions& options = {});
// Checks that `graph` was built from `cloud` before scoring.
ScoredGraph score_graph(DelaunayGraph graph, const PointCloud& cloud,
                        const ScoringOptions& options = {});

struct PathScore {
    double score = 0.0;              // mean dihedral angle along the path
    std::vector<std::size_t> path;   // vertex ids, from source to target
    double length = 0.0;             // total 3D length
};

// Single-source Dijkstra over 3D edge lengths. Among equal-length paths the
// lexicographically smallest vertex sequence wins.
class ShortestPathTree {
public:
    ShortestPathTree(const ScoredGraph& sg, std::size_t source,
                     std::size_t stop_at = std::numeric_limits<std::size_t>::max());

    std::size_t source() const noexcept { return source_; }
    bool reachable(std::size_t v) const { return dist_[v] < std::numeric_limits<double>::infinity(); }
    double distance(std::size_t v) const { return dist_[v]; }
    std::vector<std::size_t> path_to(std::size_t v) const;
    // Throws NoPathError when unreachable.
    PathScore path_score(std::size_t target) const;

private:
    bool lex_less_via(std::size_t u, std::size_t current_pred) const;

    const ScoredGraph* sg_;
    std::size_t source_;
    std::vector<double> dist_;
    std::vector<std::size_t> pred_;
};

// Throws ContractError for invalid or equal endpoints, NoPathError if disconnected.
PathScore shortest_path(const ScoredGraph& sg, std::size_t from, std::size_t to);

// CSV exports: "vertex_index,score" (cloud indices) and "edge_u,edge_v,theta".
void write_vertex_scores_csv(const ScoredGraph& sg, std::ostream& out);
void write_edge_angles_csv(const ScoredGraph& sg, std::ostream& out);

}  // namespace roofwire
