#include "roofwire/point_cloud.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "roofwire/error.hpp"

namespace roofwire {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

double parse_double(std::string_view tok, std::size_t line_no) {
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("not a number: '" + std::string(tok) + "'", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite coordinate", line_no);
    return v;
}

std::size_t parse_index(std::string_view tok, std::size_t line_no) {
    // "l 3/7 4/8" style references carry texture indices after the slash.
    tok = tok.substr(0, tok.find('/'));
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0)
        throw ParseError("bad vertex index '" + std::string(tok) + "'", line_no);
    return v;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

void Wireframe::validate() const {
    std::set<Wire> seen;
    for (const Wire& w : wires) {
        if (w.a >= corners.size() || w.b >= corners.size())
            throw ContractError("wire index out of range");
        if (w.a == w.b) throw ContractError("self-loop wire");
        if (!seen.insert(Wire::make(w.a, w.b)).second) throw ContractError("duplicate wire");
    }
    for (const Vec3& c : corners)
        if (!c.allFinite()) throw ContractError("non-finite corner coordinate");
}

void Wireframe::canonicalize() {
    for (Wire& w : wires) w = Wire::make(w.a, w.b);
    std::sort(wires.begin(), wires.end());
    wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
}

PointCloud NormalizationTransform::apply(const PointCloud& cloud) const {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.points.push_back(apply(p));
    return out;
}

PointCloud NormalizationTransform::invert(const PointCloud& cloud) const {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.points.push_back(invert(p));
    return out;
}

Wireframe NormalizationTransform::apply(const Wireframe& wf) const {
    Wireframe out = wf;
    for (Vec3& c : out.corners) c = apply(c);
    return out;
}

Wireframe NormalizationTransform::invert(const Wireframe& wf) const {
    Wireframe out = wf;
    for (Vec3& c : out.corners) c = invert(c);
    return out;
}

std::pair<PointCloud, NormalizationTransform> normalize_to_range(const PointCloud& cloud) {
    if (cloud.empty()) throw EmptyInputError("cannot normalize an empty point cloud");
    Vec3 lo = cloud.points.front();
    Vec3 hi = lo;
    for (const Vec3& p : cloud.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double extent = (hi - lo).maxCoeff();
    NormalizationTransform t;
    t.offset = lo;
    t.scale = extent > 0.0 ? kNormalizedExtent / extent : 1.0;
    return {t.apply(cloud), t};
}

PointCloud read_xyz(std::istream& in) {
    PointCloud cloud;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        if (tokens.size() != 3)
            throw ParseError("expected 3 coordinates, got " + std::to_string(tokens.size()), line_no);
        cloud.points.emplace_back(parse_double(tokens[0], line_no), parse_double(tokens[1], line_no),
                                  parse_double(tokens[2], line_no));
    }
    if (cloud.empty()) throw EmptyInputError("point cloud contains no points");
    return cloud;
}

PointCloud read_xyz_file(const std::string& path) {
    auto in = open_in(path);
    return read_xyz(in);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_xyz(const PointCloud& cloud, std::ostream& out) {
    for (const Vec3& p : cloud.points)
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
}

void write_xyz_file(const PointCloud& cloud, const std::string& path) {
    auto out = open_out(path);
    write_xyz(cloud, out);
}

Wireframe read_obj_wireframe(std::istream& in) {
    Wireframe wf;
    std::vector<std::size_t> wire_lines;
    std::set<Wire> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "v") {
            if (tokens.size() != 4 && tokens.size() != 5)
                throw ParseError("vertex record needs 3 coordinates", line_no);
            wf.corners.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                                    parse_double(tokens[3], line_no));
        } else if (tokens[0] == "l") {
            if (tokens.size() != 3)
                throw ParseError("line record must have exactly 2 vertex indices", line_no);
            const std::size_t i = parse_index(tokens[1], line_no) - 1;
            const std::size_t j = parse_index(tokens[2], line_no) - 1;
            if (i == j) throw ParseError("line record is a self-loop", line_no);
            const Wire w = Wire::make(i, j);
            if (seen.insert(w).second) {
                wf.wires.push_back(w);
                wire_lines.push_back(line_no);
            }
        }
    }
    for (std::size_t k = 0; k < wf.wires.size(); ++k) {
        if (wf.wires[k].b >= wf.corners.size())
            throw ParseError("vertex index " + std::to_string(wf.wires[k].b + 1) + " out of range",
                             wire_lines[k]);
    }
    return wf;
}

Wireframe read_obj_wireframe_file(const std::string& path) {
    auto in = open_in(path);
    return read_obj_wireframe(in);
}

void write_obj_wireframe(const Wireframe& wf, std::ostream& out) {
    for (const Vec3& c : wf.corners)
        out << "v " << format_double(c.x()) << ' ' << format_double(c.y()) << ' ' << format_double(c.z())
            << '\n';
    for (const Wire& w : wf.wires) out << "l " << w.a + 1 << ' ' << w.b + 1 << '\n';
}

void write_obj_wireframe_file(const Wireframe& wf, const std::string& path) {
    auto out = open_out(path);
    write_obj_wireframe(wf, out);
}

}  // namespace roofwire
