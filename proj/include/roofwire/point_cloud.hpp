#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "roofwire/geometry.hpp"

namespace roofwire {

struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    const Vec3& operator[](std::size_t i) const { return points[i]; }
};

// Undirected wire between two corner indices, stored with a < b.
struct Wire {
    std::size_t a = 0;
    std::size_t b = 0;

    static Wire make(std::size_t i, std::size_t j) { return i < j ? Wire{i, j} : Wire{j, i}; }
    auto operator<=>(const Wire&) const = default;
};

struct Wireframe {
    std::vector<Vec3> corners;
    std::vector<Wire> wires;

    // Throws ContractError on out-of-range indices, self-loops or duplicate wires.
    void validate() const;
    // Canonical form: every wire has a < b, wires sorted and deduplicated.
    void canonicalize();
    double wire_length(const Wire& w) const { return (corners[w.b] - corners[w.a]).norm(); }
};

// Maps scene coordinates into the working frame: normalized = (p - offset) * scale.
struct NormalizationTransform {
    double scale = 1.0;
    Vec3 offset = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return (p - offset) * scale; }
    Vec3 invert(const Vec3& q) const { return q / scale + offset; }
    PointCloud apply(const PointCloud& cloud) const;
    PointCloud invert(const PointCloud& cloud) const;
    Wireframe apply(const Wireframe& wf) const;
    Wireframe invert(const Wireframe& wf) const;
};

inline constexpr double kNormalizedExtent = 256.0;

// Uniform scale + translation taking the bounding box minimum to the origin and the
// longest box extent to [0, 256]. A single point (zero extent) maps to the origin
// with scale 1.
std::pair<PointCloud, NormalizationTransform> normalize_to_range(const PointCloud& cloud);

// One "x y z" triple per line; blank lines and '#' comments are skipped.
PointCloud read_xyz(std::istream& in);
PointCloud read_xyz_file(const std::string& path);
void write_xyz(const PointCloud& cloud, std::ostream& out);
void write_xyz_file(const PointCloud& cloud, const std::string& path);

// OBJ subset: "v x y z" and two-index "l i j" records (1-based). Other record
// types are ignored on read.
Wireframe read_obj_wireframe(std::istream& in);
Wireframe read_obj_wireframe_file(const std::string& path);
void write_obj_wireframe(const Wireframe& wf, std::ostream& out);
void write_obj_wireframe_file(const Wireframe& wf, const std::string& path);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace roofwire
