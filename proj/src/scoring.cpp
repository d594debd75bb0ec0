#include "roofwire/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <queue>

#include "roofwire/error.hpp"
#include "roofwire/parallel.hpp"

namespace roofwire {

namespace {
constexpr double kMinCrossNorm = 1e-12;
constexpr double kUnitTolerance = 1e-6;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
}  // namespace

Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 n = (b - a).cross(c - a);
    const double norm = n.norm();
    if (!(norm > kMinCrossNorm)) throw DegenerateFaceError("degenerate triangle has no normal");
    n /= norm;
    if (n.z() < 0.0) n = -n;
    return n;
}

double dihedral_angle(const Vec3& n1, const Vec3& n2) {
    if (std::abs(n1.norm() - 1.0) > kUnitTolerance || std::abs(n2.norm() - 1.0) > kUnitTolerance)
        throw ContractError("dihedral_angle expects unit normals");
    return std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
}

ScoredGraph score_graph(DelaunayGraph graph, const ScoringOptions& options) {
    ScoredGraph sg;
    sg.graph = std::move(graph);
    const DelaunayGraph& g = sg.graph;

    sg.face_normals.resize(g.faces.size());
    parallel_for(g.faces.size(), options.threads, [&](std::size_t f) {
        const auto& tri = g.faces[f];
        if (tri[0] >= g.vertex_count() || tri[1] >= g.vertex_count() || tri[2] >= g.vertex_count())
            throw ContractError("face references a missing vertex");
        sg.face_normals[f] = face_normal(g.vertices[tri[0]], g.vertices[tri[1]], g.vertices[tri[2]]);
    });

    sg.edge_angles.resize(g.edges.size());
    parallel_for(g.edges.size(), options.threads, [&](std::size_t e) {
        const auto& ef = g.edge_faces[e];
        sg.edge_angles[e] = g.is_boundary(e)
                                ? std::numbers::pi
                                : dihedral_angle(sg.face_normals[ef[0]], sg.face_normals[ef[1]]);
    });

    sg.corner_scores.resize(g.vertex_count());
    parallel_for(g.vertex_count(), options.threads, [&](std::size_t v) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t e : g.vertex_edges[v]) {
            if (options.exclude_boundary_edges && g.is_boundary(e)) continue;
            sum += sg.edge_angles[e];
            ++count;
        }
        sg.corner_scores[v] = count ? sum / static_cast<double>(count) : 0.0;
    });
    return sg;
}

ScoredGraph score_graph(DelaunayGraph graph, const PointCloud& cloud, const ScoringOptions& options) {
    if (graph.vertex_of_point.size() != cloud.size())
        throw ContractError("graph was not built from this cloud (size mismatch)");
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        const std::size_t src = graph.source_index[v];
        if (src >= cloud.size() || cloud[src] != graph.vertices[v])
            throw ContractError("graph was not built from this cloud (vertex mismatch)");
    }
    return score_graph(std::move(graph), options);
}

ShortestPathTree::ShortestPathTree(const ScoredGraph& sg, std::size_t source, std::size_t stop_at)
    : sg_(&sg), source_(source) {
    const DelaunayGraph& g = sg.graph;
    const std::size_t n = g.vertex_count();
    if (source >= n) throw ContractError("source vertex out of range");
    dist_.assign(n, std::numeric_limits<double>::infinity());
    pred_.assign(n, kNone);
    std::vector<char> done(n, 0);

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist_[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u] || d > dist_[u]) continue;
        done[u] = 1;
        if (u == stop_at) break;
        for (std::size_t e : g.vertex_edges[u]) {
            const std::size_t v = g.edges[e].other(u);
            if (done[v]) continue;
            const double nd = d + (g.vertices[v] - g.vertices[u]).norm();
            if (nd < dist_[v]) {
                dist_[v] = nd;
                pred_[v] = u;
                heap.emplace(nd, v);
            } else if (nd == dist_[v] && lex_less_via(u, pred_[v])) {
                pred_[v] = u;
            }
        }
    }
}

// True when path_to(u) is lexicographically smaller than path_to(current_pred).
bool ShortestPathTree::lex_less_via(std::size_t u, std::size_t current_pred) const {
    if (current_pred == kNone) return true;
    const auto a = path_to(u);
    const auto b = path_to(current_pred);
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::size_t> ShortestPathTree::path_to(std::size_t v) const {
    std::vector<std::size_t> path;
    if (!reachable(v)) return path;
    for (std::size_t w = v; w != kNone; w = pred_[w]) path.push_back(w);
    std::reverse(path.begin(), path.end());
    return path;
}

PathScore ShortestPathTree::path_score(std::size_t target) const {
    if (target >= dist_.size()) throw ContractError("target vertex out of range");
    if (!reachable(target)) throw NoPathError("no path between the requested vertices");
    PathScore ps;
    ps.path = path_to(target);
    ps.length = dist_[target];
    const DelaunayGraph& g = sg_->graph;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < ps.path.size(); ++i)
        sum += sg_->edge_angles[*g.edge_between(ps.path[i], ps.path[i + 1])];
    const std::size_t edges = ps.path.size() - 1;
    ps.score = edges ? sum / static_cast<double>(edges) : 0.0;
    return ps;
}

PathScore shortest_path(const ScoredGraph& sg, std::size_t from, std::size_t to) {
    const std::size_t n = sg.vertex_count();
    if (from >= n || to >= n) throw ContractError("vertex index out of range");
    if (from == to) throw ContractError("shortest_path endpoints must differ");
    return ShortestPathTree(sg, from, to).path_score(to);
}

void write_vertex_scores_csv(const ScoredGraph& sg, std::ostream& out) {
    out << "vertex_index,score\n";
    for (std::size_t v = 0; v < sg.vertex_count(); ++v)
        out << sg.graph.source_index[v] << ',' << format_double(sg.corner_scores[v]) << '\n';
}

void write_edge_angles_csv(const ScoredGraph& sg, std::ostream& out) {
    out << "edge_u,edge_v,theta\n";
    for (std::size_t e = 0; e < sg.graph.edges.size(); ++e) {
        const Edge& ed = sg.graph.edges[e];
        out << sg.graph.source_index[ed.u] << ',' << sg.graph.source_index[ed.v] << ','
            << format_double(sg.edge_angles[e]) << '\n';
    }
}

}  // namespace roofwire
