#include "roofwire/planes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <array>
#include <numeric>

#include "roofwire/error.hpp"
#include "roofwire/predicates.hpp"

namespace roofwire {

namespace {

struct Fit {
    Plane plane;
    double variation = 0.0;  // smallest eigenvalue over the trace
};

Fit fit_with_variation(std::span<const Vec3> points) {
    if (points.size() < 3) throw ContractError("a plane fit needs at least 3 points");
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Vec3& p : points) cov += (p - centroid) * (p - centroid).transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Fit fit;
    Vec3 n = eig.eigenvectors().col(0);
    if (n.z() < 0.0 || (n.z() == 0.0 && (n.x() < 0.0 || (n.x() == 0.0 && n.y() < 0.0)))) n = -n;
    fit.plane.normal = n;
    fit.plane.offset = n.dot(centroid);
    const double trace = eig.eigenvalues().sum();
    fit.variation = trace > 0.0 ? eig.eigenvalues()(0) / trace : 0.0;
    return fit;
}

// Vertical plane through the least-squares line of the (x, y) projections.
Plane fit_vertical(std::span<const Vec3> points) {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const Vec3& p : points) centroid += p.head<2>();
    centroid /= static_cast<double>(points.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const Vec3& p : points) cov += (p.head<2>() - centroid) * (p.head<2>() - centroid).transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    Eigen::Vector2d n = eig.eigenvectors().col(0);
    if (n.x() < 0.0 || (n.x() == 0.0 && n.y() < 0.0)) n = -n;
    Plane plane;
    plane.normal = Vec3(n.x(), n.y(), 0.0);
    plane.offset = n.dot(centroid);
    return plane;
}

double xy_length(const Vec3& a, const Vec3& b) { return (b.head<2>() - a.head<2>()).norm(); }

// Convex hull of the (x, y) projections, counter-clockwise, collinear points dropped.
std::vector<std::size_t> convex_hull(const DelaunayGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto xy = [&](std::size_t v) { return predicates::Point2{g.vertices[v].x(), g.vertices[v].y()}; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Vec3& p = g.vertices[a];
        const Vec3& q = g.vertices[b];
        return p.x() != q.x() ? p.x() < q.x() : p.y() != q.y() ? p.y() < q.y() : a < b;
    });
    if (n < 3) return order;
    std::vector<std::size_t> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && predicates::orient2d(xy(hull[k - 2]), xy(hull[k - 1]), xy(order[i])) <= 0) --k;
        hull[k++] = order[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && predicates::orient2d(xy(hull[k - 2]), xy(hull[k - 1]), xy(order[i])) <= 0) --k;
        hull[k++] = order[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

Plane fit_plane(std::span<const Vec3> points) { return fit_with_variation(points).plane; }

double normal_conditioning(std::span<const Plane> planes) {
    if (planes.empty()) return 0.0;
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (const Plane& p : planes) m += p.normal * p.normal.transpose();
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

std::optional<Vec3> intersect_planes(std::span<const Plane> planes, std::span<const double> weights,
                                     double min_conditioning) {
    if (planes.size() != weights.size()) throw ContractError("one weight per plane expected");
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Vec3 b = Vec3::Zero();
    double total = 0.0;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw ContractError("plane weights must be non-negative");
        a += weights[i] * planes[i].normal * planes[i].normal.transpose();
        b += weights[i] * planes[i].offset * planes[i].normal;
        total += weights[i];
    }
    if (!(total > 0.0)) return std::nullopt;
    a /= total;
    b /= total;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
    if (eig.eigenvalues()(0) < min_conditioning) return std::nullopt;
    return Vec3(eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                eig.eigenvectors().transpose() * b);
}

std::vector<std::size_t> graph_ball(const DelaunayGraph& g, std::size_t v, double radius) {
    if (v >= g.vertex_count()) throw ContractError("vertex out of range");
    const double r2 = radius * radius;
    std::vector<std::size_t> ball{v};
    for (std::size_t head = 0; head < ball.size(); ++head) {
        for (std::size_t e : g.vertex_edges[ball[head]]) {
            const std::size_t w = g.edges[e].other(ball[head]);
            if ((g.vertices[w] - g.vertices[v]).squaredNorm() > r2) continue;
            if (std::find(ball.begin(), ball.end(), w) == ball.end()) ball.push_back(w);
        }
    }
    std::sort(ball.begin(), ball.end());
    return ball;
}

PlaneSegmentation segment_planes(const DelaunayGraph& g, const PlaneSegmentationOptions& o) {
    if (!(o.neighbourhood > 0.0) || !(o.tolerance > 0.0) || !(o.hull_span > 0.0) ||
        !(o.hull_turn > 0.0 && o.hull_turn < std::numbers::pi))
        throw ContractError("invalid plane segmentation options");
    const std::size_t n = g.vertex_count();
    const std::size_t nf = g.faces.size();
    PlaneSegmentation seg;

    // Local fits rank the region seeds: flattest neighbourhoods first.
    std::vector<Fit> local(n);
    std::vector<double> variation(n, std::numeric_limits<double>::infinity());
    for (std::size_t v = 0; v < n; ++v) {
        const auto ball = graph_ball(g, v, o.neighbourhood);
        if (ball.size() < 3) continue;
        std::vector<Vec3> pts;
        pts.reserve(ball.size());
        for (std::size_t w : ball) pts.push_back(g.vertices[w]);
        local[v] = fit_with_variation(pts);
        variation[v] = local[v].variation;
    }
    const auto face_seed = [&](std::size_t f) {
        const auto& t = g.faces[f];
        return *std::min_element(t.begin(), t.end(), [&](std::size_t a, std::size_t b) {
            return variation[a] != variation[b] ? variation[a] < variation[b] : a < b;
        });
    };
    const auto face_key = [&](std::size_t f) {
        const auto& t = g.faces[f];
        return std::max({variation[t[0]], variation[t[1]], variation[t[2]]});
    };
    std::vector<std::size_t> order(nf);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> keys(nf);
    for (std::size_t f = 0; f < nf; ++f) keys[f] = face_key(f);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] != keys[b] ? keys[a] < keys[b] : a < b; });

    seg.face_plane.assign(nf, kNoPlane);
    std::vector<std::size_t> vertex_mark(n, kNoPlane);
    std::size_t attempt = 0;
    for (std::size_t seed : order) {
        if (seg.face_plane[seed] != kNoPlane || !std::isfinite(keys[seed])) continue;
        Plane plane = local[face_seed(seed)].plane;
        const auto fits = [&](std::size_t f) {
            return std::all_of(g.faces[f].begin(), g.faces[f].end(),
                               [&](std::size_t v) { return plane.distance(g.vertices[v]) <= o.tolerance; });
        };
        if (!fits(seed)) {
            // Regions without flat vertex neighbourhoods, e.g. long faces spanning a gap.
            const std::array<Vec3, 3> corners{g.vertices[g.faces[seed][0]], g.vertices[g.faces[seed][1]],
                                              g.vertices[g.faces[seed][2]]};
            plane = fit_plane(corners);
        }

        const std::size_t id = seg.planes.size();
        ++attempt;
        std::vector<std::size_t> members{seed};
        std::vector<Vec3> points;
        std::size_t fitted = 0;
        const auto take = [&](std::size_t f) {
            seg.face_plane[f] = id;
            for (std::size_t v : g.faces[f])
                if (vertex_mark[v] != attempt) {
                    vertex_mark[v] = attempt;
                    points.push_back(g.vertices[v]);
                }
        };
        take(seed);
        for (std::size_t head = 0; head < members.size(); ++head) {
            for (std::size_t e : g.face_edges[members[head]]) {
                for (std::size_t q : g.edge_faces[e]) {
                    if (q == kNoFace || seg.face_plane[q] != kNoPlane || !fits(q)) continue;
                    take(q);
                    members.push_back(q);
                }
            }
            if (points.size() >= 3 && 2 * points.size() >= 3 * std::max<std::size_t>(fitted, 4)) {
                plane = fit_with_variation(points).plane;
                fitted = points.size();
            }
        }
        if (members.size() < o.min_faces || points.size() < 3) {
            for (std::size_t f : members) seg.face_plane[f] = kNoPlane;
            continue;
        }
        seg.planes.push_back(fit_with_variation(points).plane);
    }
    seg.roof_planes = seg.planes.size();

    // Hull runs between sharp turns of the outline.
    seg.hull = convex_hull(g);
    const std::size_t m = seg.hull.size();
    seg.hull_plane.assign(m, kNoPlane);
    std::vector<std::pair<std::size_t, std::size_t>> near_run;  // (vertex, hull plane)
    if (m >= 3) {
        const auto& h = seg.hull;
        std::vector<double> edge_len(m);
        double perimeter = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            edge_len[i] = xy_length(g.vertices[h[i]], g.vertices[h[(i + 1) % m]]);
            perimeter += edge_len[i];
        }
        const double span = std::min(o.hull_span, perimeter / 4.0);
        std::vector<double> turn(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t back = i, fwd = i;
            double run = 0.0;
            for (std::size_t s = 0; s + 1 < m && run < span; ++s) {
                back = (back + m - 1) % m;
                run += edge_len[back];
            }
            run = 0.0;
            for (std::size_t s = 0; s + 1 < m && run < span; ++s) {
                run += edge_len[fwd];
                fwd = (fwd + 1) % m;
            }
            const Eigen::Vector2d a = g.vertices[h[i]].head<2>() - g.vertices[h[back]].head<2>();
            const Eigen::Vector2d b = g.vertices[h[fwd]].head<2>() - g.vertices[h[i]].head<2>();
            turn[i] = std::abs(std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b)));
        }
        // One break per maximal cyclic stretch of sharp turns, at its sharpest vertex.
        std::vector<std::size_t> breaks;
        const auto sharp = [&](std::size_t i) { return turn[i] >= o.hull_turn; };
        // Sharp vertices a long edge apart are separate turns.
        const auto continues = [&](std::size_t i) {
            const std::size_t prev = (i + m - 1) % m;
            return sharp(i) && sharp(prev) && edge_len[prev] <= span;
        };
        std::size_t origin = 0;
        while (origin < m && continues(origin)) ++origin;
        if (origin < m) {
            std::size_t best = kNoPlane;
            for (std::size_t s = 0; s < m; ++s) {
                const std::size_t i = (origin + s) % m;
                if (!continues(i) && best != kNoPlane) {
                    breaks.push_back(best);
                    best = kNoPlane;
                }
                if (sharp(i) && (best == kNoPlane || turn[i] > turn[best] || (turn[i] == turn[best] && i < best)))
                    best = i;
            }
            if (best != kNoPlane) breaks.push_back(best);
            std::sort(breaks.begin(), breaks.end());
        }
        for (std::size_t r = 0; r < breaks.size() && breaks.size() >= 2; ++r) {
            const std::size_t lo = breaks[r];
            const std::size_t hi = breaks[(r + 1) % breaks.size()];
            const std::size_t count = (hi + m - lo) % m;  // edges in the run
            double length = 0.0;
            for (std::size_t s = 0; s < count; ++s) length += edge_len[(lo + s) % m];
            const double margin = std::min(span / 2.0, length / 4.0);
            std::vector<Vec3> inner, all;
            double at = 0.0;
            for (std::size_t s = 0; s <= count; ++s) {
                const Vec3& p = g.vertices[h[(lo + s) % m]];
                all.push_back(p);
                if (at >= margin && length - at >= margin) inner.push_back(p);
                if (s < count) at += edge_len[(lo + s) % m];
            }
            Plane plane = fit_vertical(inner.size() >= 2 ? inner : all);

            // Hull vertices are the outermost samples; refit on every vertex near the run
            // and attach the plane to all of them.
            const Eigen::Vector2d a = g.vertices[h[lo]].head<2>();
            const Eigen::Vector2d chord = g.vertices[h[hi]].head<2>() - a;
            const double chord_len = chord.norm();
            const Eigen::Vector2d dir = chord_len > 0.0 ? Eigen::Vector2d(chord / chord_len) : Eigen::Vector2d::UnitX();
            const auto along = [&](std::size_t v) { return (g.vertices[v].head<2>() - a).dot(dir); };
            const double chord_margin = std::min(span / 2.0, chord_len / 4.0);
            std::vector<Vec3> band;
            for (std::size_t v = 0; v < n; ++v) {
                const double t = along(v);
                if (plane.distance(g.vertices[v]) <= o.tolerance && t >= chord_margin && t <= chord_len - chord_margin)
                    band.push_back(g.vertices[v]);
            }
            if (band.size() > inner.size() && band.size() >= 2) plane = fit_vertical(band);
            seg.planes.push_back(plane);
            const std::size_t id = seg.planes.size() - 1;
            for (std::size_t s = 0; s < count; ++s) seg.hull_plane[(lo + s) % m] = id;
            for (std::size_t v = 0; v < n; ++v) {
                const double t = along(v);
                if (plane.distance(g.vertices[v]) <= o.tolerance && t >= -o.tolerance && t <= chord_len + o.tolerance)
                    near_run.emplace_back(v, id);
            }
        }
    }

    seg.vertex_planes.assign(n, {});
    for (std::size_t f = 0; f < nf; ++f)
        if (seg.face_plane[f] != kNoPlane)
            for (std::size_t v : g.faces[f]) seg.vertex_planes[v].push_back(seg.face_plane[f]);
    for (std::size_t i = 0; i < m; ++i) {
        if (seg.hull_plane[i] == kNoPlane) continue;
        seg.vertex_planes[seg.hull[i]].push_back(seg.hull_plane[i]);
        seg.vertex_planes[seg.hull[(i + 1) % m]].push_back(seg.hull_plane[i]);
    }
    for (const auto& [v, id] : near_run) seg.vertex_planes[v].push_back(id);
    for (auto& list : seg.vertex_planes) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return seg;
}

}  // namespace roofwire
