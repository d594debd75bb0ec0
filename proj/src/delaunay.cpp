#include "roofwire/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "roofwire/error.hpp"
#include "roofwire/predicates.hpp"

namespace roofwire {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Twice the (x, y) area below which a face is dropped as degenerate.
constexpr double kMinDoubleArea = 1e-12;

inline std::size_t next_he(std::size_t e) { return e % 3 == 2 ? e - 2 : e + 1; }
inline std::size_t prev_he(std::size_t e) { return e % 3 == 0 ? e + 2 : e - 1; }

// Merges (x, y)-coincident points. Returns surviving cloud indices in ascending
// order and the cloud -> vertex map.
void merge_duplicates(const PointCloud& cloud, double eps, std::vector<std::size_t>& survivors,
                      std::vector<std::size_t>& vertex_of_point) {
    const std::size_t n = cloud.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Vec3& p = cloud[a];
        const Vec3& q = cloud[b];
        if (p.x() != q.x()) return p.x() < q.x();
        if (p.y() != q.y()) return p.y() < q.y();
        return a < b;
    });

    // Each group is represented by its first member in sweep order; `best` tracks
    // the member that survives (max z, then lowest index).
    std::vector<std::size_t> group_of(n, kNone);
    std::vector<std::size_t> reps;
    std::vector<std::size_t> best;
    std::size_t window = 0;
    for (std::size_t idx : order) {
        const Vec3& p = cloud[idx];
        while (window < reps.size() && cloud[reps[window]].x() < p.x() - eps) ++window;
        std::size_t group = kNone;
        for (std::size_t r = window; r < reps.size(); ++r) {
            const Vec3& q = cloud[reps[r]];
            const double dx = p.x() - q.x();
            const double dy = p.y() - q.y();
            if (dx * dx + dy * dy <= eps * eps) {
                group = r;
                break;
            }
        }
        if (group == kNone) {
            group = reps.size();
            reps.push_back(idx);
            best.push_back(idx);
        } else {
            const std::size_t cur = best[group];
            const double z = p.z();
            const double zc = cloud[cur].z();
            if (z > zc || (z == zc && idx < cur)) best[group] = idx;
        }
        group_of[idx] = group;
    }

    survivors = best;
    std::sort(survivors.begin(), survivors.end());
    std::vector<std::size_t> vertex_of_group(reps.size());
    for (std::size_t v = 0; v < survivors.size(); ++v) {
        // best[] entries are unique cloud indices; locate the group by scan-free lookup.
        vertex_of_group[group_of[survivors[v]]] = v;
    }
    vertex_of_point.assign(n, kNone);
    for (std::size_t i = 0; i < n; ++i) vertex_of_point[i] = vertex_of_group[group_of[i]];
}

// Sweep-line incremental construction: points are inserted in lexicographic (x, y)
// order, so each new point lies outside the current hull. It is connected to the
// visible hull edges and the new triangles are legalized with Lawson flips.
class SweepTriangulator {
public:
    explicit SweepTriangulator(const std::vector<Vec3>& pts) : pts_(pts) {}

    // Returns the vertex triples of the triangulation (counter-clockwise).
    std::vector<std::array<std::size_t, 3>> run() {
        const std::size_t n = pts_.size();
        if (n < 3) throw TriangulationError("need at least 3 distinct (x, y) points");

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pts_[a].x() != pts_[b].x()) return pts_[a].x() < pts_[b].x();
            return pts_[a].y() < pts_[b].y();
        });

        std::size_t k = 2;
        while (k < n && orient(order[0], order[1], order[k]) == 0) ++k;
        if (k == n) throw TriangulationError("all (x, y) projections are collinear");

        triangles_.reserve(6 * n);
        halfedges_.reserve(6 * n);
        hull_next_.assign(n, kNone);
        hull_prev_.assign(n, kNone);
        hull_tri_.assign(n, kNone);

        seed(order, k);
        for (std::size_t i = k + 1; i < n; ++i) insert(order[i], order[i - 1]);

        std::vector<std::array<std::size_t, 3>> out;
        out.reserve(triangles_.size() / 3);
        for (std::size_t t = 0; t < triangles_.size(); t += 3)
            out.push_back({triangles_[t], triangles_[t + 1], triangles_[t + 2]});
        return out;
    }

private:
    predicates::Point2 xy(std::size_t v) const { return {pts_[v].x(), pts_[v].y()}; }
    int orient(std::size_t a, std::size_t b, std::size_t c) const {
        return predicates::orient2d(xy(a), xy(b), xy(c));
    }

    std::size_t add_triangle(std::size_t a, std::size_t b, std::size_t c, std::size_t ha,
                             std::size_t hb, std::size_t hc) {
        const std::size_t t = triangles_.size();
        triangles_.insert(triangles_.end(), {a, b, c});
        halfedges_.insert(halfedges_.end(), {kNone, kNone, kNone});
        link(t, ha);
        link(t + 1, hb);
        link(t + 2, hc);
        return t;
    }

    void link(std::size_t a, std::size_t b) {
        halfedges_[a] = b;
        if (b != kNone) halfedges_[b] = a;
    }

    // Fan the first non-collinear point onto the initial collinear chain.
    void seed(const std::vector<std::size_t>& order, std::size_t k) {
        const std::size_t apex = order[k];
        const bool ccw = orient(order[0], order[1], apex) > 0;
        std::size_t prev_side = kNone;  // halfedge apex-side shared with previous fan triangle
        std::vector<std::size_t> base_he(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            const std::size_t a = order[i];
            const std::size_t b = order[i + 1];
            std::size_t t;
            if (ccw) {
                // (a, b, apex): a->b base, b->apex, apex->a
                t = add_triangle(a, b, apex, kNone, kNone, prev_side);
                prev_side = t + 1;  // b->apex, matched by apex->b of the next triangle
                base_he[i] = t;
            } else {
                // (b, a, apex): b->a base, a->apex, apex->b
                t = add_triangle(b, a, apex, kNone, prev_side, kNone);
                prev_side = t + 2;  // apex->b, matched by b->apex of the next triangle
                base_he[i] = t;
            }
        }
        // Hull (counter-clockwise) and its boundary halfedges.
        const std::size_t first = order[0];
        const std::size_t last = order[k - 1];
        if (ccw) {
            for (std::size_t i = 0; i + 1 < k; ++i) {
                hull_next_[order[i]] = order[i + 1];
                hull_prev_[order[i + 1]] = order[i];
                hull_tri_[order[i]] = base_he[i];
            }
            hull_next_[last] = apex;
            hull_prev_[apex] = last;
            hull_tri_[last] = base_he[k - 2] + 1;
            hull_next_[apex] = first;
            hull_prev_[first] = apex;
            hull_tri_[apex] = 2;  // apex->first in the first triangle
        } else {
            for (std::size_t i = 0; i + 1 < k; ++i) {
                hull_next_[order[i + 1]] = order[i];
                hull_prev_[order[i]] = order[i + 1];
                hull_tri_[order[i + 1]] = base_he[i];
            }
            hull_next_[first] = apex;
            hull_prev_[apex] = first;
            hull_tri_[first] = 1;  // first->apex in the first triangle
            hull_next_[apex] = last;
            hull_prev_[last] = apex;
            hull_tri_[apex] = base_he[k - 2] + 2;
        }
    }

    bool visible(std::size_t u, std::size_t p) const { return orient(u, hull_next_[u], p) < 0; }

    void insert(std::size_t p, std::size_t last) {
        // Locate a visible hull edge, starting from the previously inserted point,
        // which is the lexicographically largest hull vertex.
        std::size_t start = kNone;
        if (visible(last, p)) {
            start = last;
        } else if (visible(hull_prev_[last], p)) {
            start = hull_prev_[last];
        } else {
            std::size_t u = last;
            do {
                if (visible(u, p)) {
                    start = u;
                    break;
                }
                u = hull_next_[u];
            } while (u != last);
        }
        if (start == kNone) throw TriangulationError("internal: no visible hull edge");

        // Walk back to the beginning of the visible chain.
        std::size_t guard = 0;
        while (visible(hull_prev_[start], p)) {
            start = hull_prev_[start];
            if (++guard > pts_.size()) throw TriangulationError("internal: hull walk diverged");
        }

        std::size_t u = start;
        std::size_t prev_tri = kNone;
        std::size_t first_tri = kNone;
        std::vector<std::size_t> to_legalize;
        while (visible(u, p)) {
            const std::size_t w = hull_next_[u];
            // (w, u, p): w->u faces the old boundary halfedge u->w.
            const std::size_t t =
                add_triangle(w, u, p, hull_tri_[u], kNone, kNone);
            if (prev_tri != kNone) link(t + 1, prev_tri + 2);  // u->p vs p->u
            if (first_tri == kNone) first_tri = t;
            prev_tri = t;
            to_legalize.push_back(t);
            if (u != start) {
                hull_next_[u] = kNone;
                hull_prev_[u] = kNone;
                hull_tri_[u] = kNone;
            }
            u = w;
        }
        const std::size_t end = u;
        hull_next_[start] = p;
        hull_prev_[p] = start;
        hull_tri_[start] = first_tri + 1;  // start->p
        hull_next_[p] = end;
        hull_prev_[end] = p;
        hull_tri_[p] = prev_tri + 2;  // p->end

        for (std::size_t t : to_legalize) legalize(t);
    }

    // Lawson flips on halfedge a, whose triangle's opposite vertex is the new point.
    void legalize(std::size_t a0) {
        stack_.clear();
        stack_.push_back(a0);
        while (!stack_.empty()) {
            const std::size_t a = stack_.back();
            stack_.pop_back();
            const std::size_t b = halfedges_[a];
            if (b == kNone) continue;

            const std::size_t al = next_he(a);
            const std::size_t ar = prev_he(a);
            const std::size_t bn = next_he(b);
            const std::size_t bl = prev_he(b);

            const std::size_t pr = triangles_[a];
            const std::size_t pl = triangles_[al];
            const std::size_t p0 = triangles_[ar];
            const std::size_t p1 = triangles_[bl];

            const int ic = predicates::incircle(xy(p0), xy(pr), xy(pl), xy(p1));
            const bool illegal = ic > 0 || (ic == 0 && std::min(p0, p1) < std::min(pr, pl));
            if (!illegal) continue;

            const std::size_t hbl = halfedges_[bl];
            const std::size_t har = halfedges_[ar];
            triangles_[a] = p1;
            triangles_[b] = p0;
            link(a, hbl);
            link(b, har);
            link(ar, bl);
            if (hbl == kNone) hull_tri_[p1] = a;
            if (har == kNone) hull_tri_[p0] = b;

            stack_.push_back(bn);
            stack_.push_back(a);
        }
    }

    const std::vector<Vec3>& pts_;
    std::vector<std::size_t> triangles_;
    std::vector<std::size_t> halfedges_;
    std::vector<std::size_t> hull_next_;
    std::vector<std::size_t> hull_prev_;
    std::vector<std::size_t> hull_tri_;
    std::vector<std::size_t> stack_;
};

}  // namespace

std::optional<std::size_t> DelaunayGraph::edge_between(std::size_t a, std::size_t b) const {
    for (std::size_t e : vertex_edges[a])
        if (edges[e].other(a) == b) return e;
    return std::nullopt;
}

DelaunayGraph triangulate(const PointCloud& cloud, double xy_epsilon) {
    for (const Vec3& p : cloud.points)
        if (!p.allFinite()) throw TriangulationError("non-finite input coordinate");
    if (!(xy_epsilon >= 0.0)) throw ContractError("xy_epsilon must be non-negative");

    DelaunayGraph g;
    merge_duplicates(cloud, xy_epsilon, g.source_index, g.vertex_of_point);
    g.vertices.reserve(g.source_index.size());
    for (std::size_t idx : g.source_index) g.vertices.push_back(cloud[idx]);

    auto raw = SweepTriangulator(g.vertices).run();

    // Canonical face order: rotate so the smallest id leads, then sort.
    g.faces.reserve(raw.size());
    for (auto f : raw) {
        const Vec3& a = g.vertices[f[0]];
        const Vec3& b = g.vertices[f[1]];
        const Vec3& c = g.vertices[f[2]];
        const double area2 = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        const std::size_t lead = static_cast<std::size_t>(
            std::min_element(f.begin(), f.end()) - f.begin());
        std::rotate(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(lead), f.end());
        if (std::abs(area2) <= kMinDoubleArea) {
            // Keep its edges in the graph, but not the face itself.
            g.faces.push_back({f[0], f[1], kNone});
            g.faces.push_back({f[1], f[2], kNone});
            g.faces.push_back({f[0], f[2], kNone});
            continue;
        }
        g.faces.push_back(f);
    }

    // Collect edges from every triple (including the edge-only placeholders).
    std::vector<Edge> all;
    all.reserve(g.faces.size() * 3);
    for (const auto& f : g.faces) {
        if (f[2] == kNone) {
            all.push_back({std::min(f[0], f[1]), std::max(f[0], f[1])});
            continue;
        }
        for (int i = 0; i < 3; ++i) {
            const std::size_t a = f[i], b = f[(i + 1) % 3];
            all.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    g.edges = std::move(all);

    std::erase_if(g.faces, [](const auto& f) { return f[2] == kNone; });
    std::sort(g.faces.begin(), g.faces.end());

    const std::size_t nv = g.vertices.size();
    g.vertex_edges.assign(nv, {});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.vertex_edges[g.edges[e].u].push_back(e);
        g.vertex_edges[g.edges[e].v].push_back(e);
    }
    for (std::size_t v = 0; v < nv; ++v) {
        auto& list = g.vertex_edges[v];
        std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
            return g.edges[x].other(v) < g.edges[y].other(v);
        });
    }

    g.edge_faces.assign(g.edges.size(), {kNoFace, kNoFace});
    g.face_edges.resize(g.faces.size());
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
        const auto& f = g.faces[fi];
        for (int i = 0; i < 3; ++i) {
            const std::size_t e = *g.edge_between(f[i], f[(i + 1) % 3]);
            g.face_edges[fi][i] = e;
            auto& slot = g.edge_faces[e];
            if (slot[0] == kNoFace)
                slot[0] = fi;
            else if (slot[1] == kNoFace)
                slot[1] = fi;
            else
                throw TriangulationError("internal: edge shared by more than two faces");
        }
    }
    return g;
}

std::vector<std::size_t> boundary_edges(const DelaunayGraph& graph) {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
        if (graph.is_boundary(e)) out.push_back(e);
    return out;
}

void write_obj_mesh(const DelaunayGraph& graph, std::ostream& out) {
    for (const Vec3& p : graph.vertices)
        out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
            << format_double(p.z()) << '\n';
    for (const auto& f : graph.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace roofwire
