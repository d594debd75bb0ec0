#include "roofwire/reconstruction.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <cmath>
#include <numeric>
#include <ostream>

#include "roofwire/error.hpp"
#include "roofwire/parallel.hpp"
#include "roofwire/planes.hpp"

namespace roofwire {

std::string to_string(CornerMode m) {
    return m == CornerMode::nms ? "nms" : "planes";
}

CornerMode parse_corner_mode(const std::string& name) {
    if (name == "nms") return CornerMode::nms;
    if (name == "planes") return CornerMode::planes;
    throw ContractError("unknown corner mode '" + name + "'");
}

void ReconstructionParams::validate() const {
    if (k < 1) throw ContractError("k must be at least 1");
    if (!(nms_radius > 0.0)) throw ContractError("nms_radius must be positive");
    if (!(corner_threshold >= 0.0 && corner_threshold <= std::numbers::pi))
        throw ContractError("corner_threshold must lie in [0, pi]");
    if (!(wire_scale_threshold > 0.5 && wire_scale_threshold < 1.0))
        throw ContractError("wire_scale_threshold must lie in (0.5, 1)");
    if (!(max_straightness_deviation > 0.0))
        throw ContractError("max_straightness_deviation must be positive");
    if (!(xy_epsilon >= 0.0)) throw ContractError("xy_epsilon must be non-negative");
    if (!(plane_tolerance > 0.0)) throw ContractError("plane_tolerance must be positive");
    if (plane_min_faces < 1) throw ContractError("plane_min_faces must be at least 1");
    if (!(hull_turn > 0.0 && hull_turn < std::numbers::pi)) throw ContractError("hull_turn must lie in (0, pi)");
    if (!(corner_reach > 0.0)) throw ContractError("corner_reach must be positive");
    if (threads < 1) throw ContractError("threads must be at least 1");
}

std::vector<std::size_t> corner_score_sampling(const ScoredGraph& sg, std::size_t k) {
    if (k < 1) throw ContractError("corner_score_sampling needs k >= 1");
    std::vector<std::size_t> order(sg.vertex_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    const auto by_score = [&](std::size_t a, std::size_t b) {
        const double sa = sg.corner_scores[a];
        const double sb = sg.corner_scores[b];
        return sa != sb ? sa > sb : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      by_score);
    order.resize(take);
    return order;
}

CornerSelection select_corners(const ScoredGraph& sg, std::span<const std::size_t> sampled,
                               const ReconstructionParams& params) {
    const auto& pos = sg.graph.vertices;
    const double r2 = params.nms_radius * params.nms_radius;

    struct Cluster {
        std::size_t seed;
        std::vector<std::size_t> members;
    };
    std::vector<Cluster> clusters;
    for (std::size_t v : sampled) {
        if (v >= sg.vertex_count()) throw ContractError("sampled vertex out of range");
        std::size_t best = clusters.size();
        double best_d2 = r2;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double d2 = (pos[v] - pos[clusters[c].seed]).squaredNorm();
            if (d2 <= best_d2 && (best == clusters.size() || d2 < best_d2)) {
                best = c;
                best_d2 = d2;
            }
        }
        if (best == clusters.size())
            clusters.push_back({v, {v}});
        else
            clusters[best].members.push_back(v);
    }

    CornerSelection out;
    for (const Cluster& c : clusters) {
        const double seed_score = sg.corner_scores[c.seed];
        if (seed_score < params.corner_threshold) continue;
        Vec3 acc = Vec3::Zero();
        double weight = 0.0;
        for (std::size_t m : c.members) {
            acc += sg.corner_scores[m] * pos[m];
            weight += sg.corner_scores[m];
        }
        Vec3 centroid;
        if (weight > 0.0) {
            centroid = acc / weight;
        } else {
            centroid = Vec3::Zero();
            for (std::size_t m : c.members) centroid += pos[m];
            centroid /= static_cast<double>(c.members.size());
        }
        std::size_t nearest = 0;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < pos.size(); ++v) {
            const double d2 = (pos[v] - centroid).squaredNorm();
            if (d2 < nearest_d2) {
                nearest = v;
                nearest_d2 = d2;
            }
        }
        out.corners.push_back(centroid);
        out.snap.push_back(nearest);
        out.seed_scores.push_back(seed_score);
    }
    return out;
}

namespace {
// Smallest eigenvalue of sum n n^T for planes that pin down a point.
constexpr double kMinConditioning = 0.1;

std::size_t nearest_vertex(const DelaunayGraph& g, const Vec3& p) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const double d2 = (g.vertices[v] - p).squaredNorm();
        if (d2 < best_d2) {
            best = v;
            best_d2 = d2;
        }
    }
    return best;
}
}  // namespace

CornerSelection select_plane_corners(const ScoredGraph& sg, std::span<const std::size_t> sampled,
                                     const ReconstructionParams& params) {
    const DelaunayGraph& g = sg.graph;
    const std::size_t n = g.vertex_count();
    PlaneSegmentationOptions options;
    options.tolerance = params.plane_tolerance;
    options.min_faces = params.plane_min_faces;
    options.hull_turn = params.hull_turn;
    const PlaneSegmentation seg = segment_planes(g, options);

    // Planes within reach of each sampled vertex; keep the well-conditioned ones.
    std::vector<std::vector<std::size_t>> seen(n);
    std::vector<char> candidate(n, 0);
    for (std::size_t v : sampled) {
        if (v >= n) throw ContractError("sampled vertex out of range");
        std::vector<std::size_t> ids;
        for (std::size_t w : graph_ball(g, v, params.corner_reach))
            ids.insert(ids.end(), seg.vertex_planes[w].begin(), seg.vertex_planes[w].end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::vector<Plane> planes;
        for (std::size_t id : ids) planes.push_back(seg.planes[id]);
        if (normal_conditioning(planes) >= kMinConditioning) {
            candidate[v] = 1;
            seen[v] = std::move(ids);
        }
    }

    struct Group {
        std::vector<std::size_t> members;
        Vec3 corner;
    };
    std::vector<Group> groups;
    std::vector<char> visited(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (!candidate[start] || visited[start]) continue;
        Group grp;
        grp.members.push_back(start);
        visited[start] = 1;
        for (std::size_t head = 0; head < grp.members.size(); ++head) {
            for (std::size_t e : g.vertex_edges[grp.members[head]]) {
                const std::size_t w = g.edges[e].other(grp.members[head]);
                const double length = (g.vertices[w] - g.vertices[grp.members[head]]).norm();
                if (candidate[w] && !visited[w] && length <= params.corner_reach) {
                    visited[w] = 1;
                    grp.members.push_back(w);
                }
            }
        }
        // Weight each plane by how many members see it.
        std::map<std::size_t, double> votes;
        for (std::size_t v : grp.members)
            for (std::size_t id : seen[v]) votes[id] += 1.0;
        std::vector<Plane> planes;
        std::vector<double> weights;
        for (const auto& [id, w] : votes) {
            planes.push_back(seg.planes[id]);
            weights.push_back(w);
        }
        const auto point = intersect_planes(planes, weights, 1e-6);
        if (!point) continue;
        double reach2 = std::numeric_limits<double>::infinity();
        for (std::size_t v : grp.members) reach2 = std::min(reach2, (g.vertices[v] - *point).squaredNorm());
        if (reach2 > params.nms_radius * params.nms_radius) continue;
        grp.corner = *point;
        groups.push_back(std::move(grp));
    }

    // Larger groups first; drop corners within nms_radius of a kept one.
    std::stable_sort(groups.begin(), groups.end(),
                     [](const Group& a, const Group& b) { return a.members.size() > b.members.size(); });
    CornerSelection out;
    const double r2 = params.nms_radius * params.nms_radius;
    for (const Group& grp : groups) {
        const bool close = std::any_of(out.corners.begin(), out.corners.end(),
                                       [&](const Vec3& c) { return (c - grp.corner).squaredNorm() <= r2; });
        if (close) continue;
        out.snap.push_back(nearest_vertex(g, grp.corner));
        out.corners.push_back(g.vertices[out.snap.back()]);
        out.seed_scores.push_back(sg.corner_scores[out.snap.back()]);
    }
    return out;
}

double query_scale_factor(double path_score) {
    constexpr double kSlack = 1e-9;
    if (!(path_score >= -kSlack && path_score <= std::numbers::pi + kSlack))
        throw ContractError("path score outside [0, pi]");
    return 1.0 / (1.0 + std::exp(-path_score));
}

std::vector<WireCandidate> enumerate_wire_candidates(const CornerSelection& corners,
                                                     const ScoredGraph& sg, unsigned threads) {
    const std::size_t m = corners.corners.size();
    if (corners.snap.size() != m) throw ContractError("snap map size mismatch");
    std::vector<WireCandidate> out;
    if (m < 2) return out;
    out.reserve(m * (m - 1) / 2);
    std::vector<std::size_t> row_start(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        row_start[i] = out.size();
        for (std::size_t j = i + 1; j < m; ++j) {
            WireCandidate c;
            c.i = i;
            c.j = j;
            c.vi = corners.snap[i];
            c.vj = corners.snap[j];
            out.push_back(std::move(c));
        }
    }
    // One shortest-path tree per source corner covers its whole row.
    parallel_for(m - 1, threads, [&](std::size_t i) {
        const ShortestPathTree tree(sg, corners.snap[i]);
        for (std::size_t j = i + 1; j < m; ++j) {
            WireCandidate& c = out[row_start[i] + (j - i - 1)];
            if (c.vi == c.vj || !tree.reachable(c.vj)) continue;
            PathScore ps = tree.path_score(c.vj);
            c.path_score = ps.score;
            c.scale_factor = query_scale_factor(ps.score);
            c.path = std::move(ps.path);
        }
    });
    return out;
}

std::vector<Wire> select_wires(std::span<const WireCandidate> candidates, std::span<const Vec3> corners,
                               const ScoredGraph& sg, const ReconstructionParams& params) {
    std::vector<Wire> wires;
    for (const WireCandidate& c : candidates) {
        if (!c.path_score || !c.scale_factor) continue;
        if (*c.scale_factor < params.wire_scale_threshold) continue;
        if (c.i >= corners.size() || c.j >= corners.size())
            throw ContractError("candidate references a missing corner");
        double deviation = 0.0;
        for (std::size_t v : c.path)
            deviation = std::max(deviation,
                                 point_segment_distance(sg.graph.vertices[v], corners[c.i], corners[c.j]));
        if (deviation > params.max_straightness_deviation) continue;
        wires.push_back(Wire::make(c.i, c.j));
    }
    std::sort(wires.begin(), wires.end());
    wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
    return wires;
}

ReconstructionResult reconstruct_detailed(const PointCloud& cloud, const ReconstructionParams& params,
                                          const CornerSelector* corner_selector,
                                          const WireSelector* wire_selector) {
    params.validate();
    const NmsCornerSelector nms_corners(params);
    const PlaneCornerSelector plane_corners(params);
    const PathScoreWireSelector default_wires(params);
    if (!corner_selector)
        corner_selector = params.corner_mode == CornerMode::planes
                              ? static_cast<const CornerSelector*>(&plane_corners)
                              : &nms_corners;
    if (!wire_selector) wire_selector = &default_wires;

    ReconstructionResult result;
    auto [normalized, transform] = normalize_to_range(cloud);
    result.transform = transform;

    const auto t0 = std::chrono::steady_clock::now();
    ScoringOptions options;
    options.exclude_boundary_edges = params.exclude_boundary_edges;
    options.threads = params.threads;
    const ScoredGraph sg = score_graph(triangulate(normalized, params.xy_epsilon), options);
    result.scoring_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.graph_vertices = sg.vertex_count();

    const auto sampled = corner_score_sampling(sg, params.k);
    const CornerSelection selection = corner_selector->select(sg, sampled);
    result.candidates = enumerate_wire_candidates(selection, sg, params.threads);
    const auto wires = wire_selector->select(result.candidates, selection.corners, sg);

    result.accepted.assign(result.candidates.size(), false);
    for (std::size_t c = 0; c < result.candidates.size(); ++c) {
        const Wire w = Wire::make(result.candidates[c].i, result.candidates[c].j);
        result.accepted[c] = std::binary_search(wires.begin(), wires.end(), w);
    }

    result.normalized.corners = selection.corners;
    result.normalized.wires = wires;
    result.wireframe = transform.invert(result.normalized);
    return result;
}

Wireframe reconstruct(const PointCloud& cloud, const ReconstructionParams& params) {
    return reconstruct_detailed(cloud, params).wireframe;
}

void write_candidates_csv(const ReconstructionResult& result, std::ostream& out) {
    out << "i,j,path_score,scale_factor,accepted\n";
    for (std::size_t c = 0; c < result.candidates.size(); ++c) {
        const WireCandidate& w = result.candidates[c];
        out << w.i << ',' << w.j << ',';
        if (w.path_score) out << format_double(*w.path_score);
        out << ',';
        if (w.scale_factor) out << format_double(*w.scale_factor);
        out << ',' << (result.accepted[c] ? 1 : 0) << '\n';
    }
}

}  // namespace roofwire
