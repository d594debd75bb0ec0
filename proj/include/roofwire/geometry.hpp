#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace roofwire {

using Vec3 = Eigen::Vector3d;

// Distance from p to the closed segment [a, b].
inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return (p - (a + t * ab)).norm();
}

}  // namespace roofwire
