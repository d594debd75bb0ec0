#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "roofwire/delaunay.hpp"

namespace roofwire {

// Plane n . p = offset with |n| = 1.
struct Plane {
    Vec3 normal = Vec3::UnitZ();
    double offset = 0.0;
    double distance(const Vec3& p) const { return std::abs(normal.dot(p) - offset); }
};

// Least-squares plane through the points (normal of least variance). Needs 3 points.
Plane fit_plane(std::span<const Vec3> points);

// Weighted least-squares intersection of the planes. Empty when the normals do not
// pin down a point, i.e. the smallest eigenvalue of sum w n n^T / sum w is below
// min_conditioning.
std::optional<Vec3> intersect_planes(std::span<const Plane> planes, std::span<const double> weights,
                                     double min_conditioning);

// Smallest eigenvalue of sum n n^T over the given planes. Adding planes never lowers it.
double normal_conditioning(std::span<const Plane> planes);

struct PlaneSegmentationOptions {
    double neighbourhood = 8.0;   // radius of the local fit used to start a region
    double tolerance = 1.5;       // max point-plane distance inside a region
    std::size_t min_faces = 30;   // smaller regions are discarded
    double hull_span = 12.0;      // arc length over which hull turns are measured
    double hull_turn = 0.6;       // rad; sharper hull turns split the outline
};

inline constexpr std::size_t kNoPlane = std::numeric_limits<std::size_t>::max();

// Planar regions of the triangulated surface plus one vertical plane per straight
// run of the convex hull outline.
struct PlaneSegmentation {
    std::vector<Plane> planes;                // roof regions first, then hull runs
    std::size_t roof_planes = 0;
    std::vector<std::size_t> face_plane;      // per face, kNoPlane when unassigned
    std::vector<std::size_t> hull;            // convex hull vertices, counter-clockwise
    std::vector<std::size_t> hull_plane;      // plane of edge (hull[i], hull[i + 1])

    // Planes touching vertex v through an incident face, or a hull run passing within
    // tolerance of it.
    std::vector<std::vector<std::size_t>> vertex_planes;
};

PlaneSegmentation segment_planes(const DelaunayGraph& graph, const PlaneSegmentationOptions& options = {});

// Vertices reachable from v over graph edges without leaving the ball of the given
// radius around v, v included. Sorted.
std::vector<std::size_t> graph_ball(const DelaunayGraph& graph, std::size_t v, double radius);

}  // namespace roofwire
