#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.
// They trade speed for obviousness and use none of the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "roofwire/delaunay.hpp"
#include "roofwire/scoring.hpp"

namespace oracle {

using roofwire::Vec3;

inline roofwire::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    roofwire::PointCloud c;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng), z = u(rng);
        c.points.emplace_back(x, y, z);
    }
    return c;
}

// Sign of the in-circle determinant in long double, 0 inside a relative band.
inline int incircle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    using L = long double;
    const L adx = L(a.x()) - L(d.x()), ady = L(a.y()) - L(d.y());
    const L bdx = L(b.x()) - L(d.x()), bdy = L(b.y()) - L(d.y());
    const L cdx = L(c.x()) - L(d.x()), cdy = L(c.y()) - L(d.y());
    const L al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    const L det = adx * (bdy * cl - bl * cdy) - ady * (bdx * cl - bl * cdx) + al * (bdx * cdy - bdy * cdx);
    const L scale = (std::fabs(adx) + std::fabs(ady) + std::fabs(bdx) + std::fabs(bdy) + std::fabs(cdx) +
                     std::fabs(cdy));
    const L eps = 1e-12L * scale * scale * scale * scale;
    return det > eps ? 1 : (det < -eps ? -1 : 0);
}

inline double cross2(const Vec3& o, const Vec3& a, const Vec3& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Faces with a vertex strictly inside their circumcircle.
inline std::size_t circumcircle_violations(const roofwire::DelaunayGraph& g) {
    std::size_t bad = 0;
    for (const auto& f : g.faces) {
        const Vec3 &a = g.vertices[f[0]], &b = g.vertices[f[1]], &c = g.vertices[f[2]];
        const bool ccw = cross2(a, b, c) > 0;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            if (v == f[0] || v == f[1] || v == f[2]) continue;
            const int s = ccw ? incircle(a, b, c, g.vertices[v]) : incircle(a, c, b, g.vertices[v]);
            if (s > 0) ++bad;
        }
    }
    return bad;
}

// Jarvis march over the (x, y) projection; collinear hull points are skipped.
// Counter-clockwise, starting at the lowest-x (then lowest-y) point.
inline std::vector<std::size_t> gift_wrap(std::span<const Vec3> pts) {
    const std::size_t n = pts.size();
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i].x() < pts[start].x() || (pts[i].x() == pts[start].x() && pts[i].y() < pts[start].y()))
            start = i;
    std::vector<std::size_t> hull;
    std::size_t p = start;
    do {
        hull.push_back(p);
        std::size_t q = (p + 1) % n;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == p) continue;
            const double c = cross2(pts[p], pts[q], pts[r]);
            const double dq = (pts[q] - pts[p]).head<2>().squaredNorm();
            const double dr = (pts[r] - pts[p]).head<2>().squaredNorm();
            if (c < 0 || (c == 0 && dr > dq)) q = r;
        }
        p = q;
    } while (p != start && hull.size() <= n);
    return hull;
}

struct BestPath {
    double length = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> path;
};

// Enumerates every simple path from s to t. Lengths are accumulated from s in path
// order; the lexicographically smallest sequence wins among exactly equal lengths.
inline BestPath best_simple_path(const roofwire::DelaunayGraph& g, std::size_t s, std::size_t t) {
    BestPath best;
    std::vector<char> used(g.vertex_count(), 0);
    std::vector<std::size_t> cur{s};
    used[s] = 1;
    std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double len) {
        if (u == t) {
            if (len < best.length || (len == best.length && cur < best.path)) {
                best.length = len;
                best.path = cur;
            }
            return;
        }
        for (std::size_t e : g.vertex_edges[u]) {
            const std::size_t w = g.edges[e].other(u);
            if (used[w]) continue;
            used[w] = 1;
            cur.push_back(w);
            dfs(w, len + (g.vertices[w] - g.vertices[u]).norm());
            cur.pop_back();
            used[w] = 0;
        }
    };
    dfs(s, 0.0);
    return best;
}

struct BestAssignment {
    std::size_t cardinality = 0;
    double cost = 0.0;
};

// Tries every partial injective map pred -> gt restricted to distance <= threshold.
inline BestAssignment best_assignment(std::span<const Vec3> pred, std::span<const Vec3> gt, double threshold) {
    BestAssignment best;
    std::vector<char> used(gt.size(), 0);
    std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t i, std::size_t card, double cost) {
        if (i == pred.size()) {
            if (card > best.cardinality || (card == best.cardinality && cost < best.cost)) {
                best.cardinality = card;
                best.cost = cost;
            }
            return;
        }
        rec(i + 1, card, cost);
        for (std::size_t j = 0; j < gt.size(); ++j) {
            const double d = (pred[i] - gt[j]).norm();
            if (used[j] || d > threshold) continue;
            used[j] = 1;
            rec(i + 1, card + 1, cost + d);
            used[j] = 0;
        }
    };
    rec(0, 0, 0.0);
    return best;
}

}  // namespace oracle
