#include "roofwire/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "roofwire/error.hpp"

namespace roofwire {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParseError("'" + key + "' expects a number, got '" + v + "'", 0);
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParseError("'" + key + "' expects a non-negative integer, got '" + v + "'", 0);
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("'" + key + "' expects true/false, got '" + v + "'", 0);
}

}  // namespace

std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("empty key or value", line_no);
        out[key] = value;
    }
    return out;
}

void apply_config(const std::map<std::string, std::string>& values, ReconstructionParams& params,
                  PerturbSpec* perturb) {
    for (const auto& [key, v] : values) {
        if (key == "k") {
            params.k = to_int<std::size_t>(key, v);
        } else if (key == "nms_radius") {
            params.nms_radius = to_double(key, v);
        } else if (key == "corner_threshold") {
            params.corner_threshold = to_double(key, v);
        } else if (key == "wire_scale_threshold") {
            params.wire_scale_threshold = to_double(key, v);
        } else if (key == "max_straightness_deviation") {
            params.max_straightness_deviation = to_double(key, v);
        } else if (key == "exclude_boundary_edges") {
            params.exclude_boundary_edges = to_bool(key, v);
        } else if (key == "xy_epsilon") {
            params.xy_epsilon = to_double(key, v);
        } else if (key == "corner_mode") {
            try {
                params.corner_mode = parse_corner_mode(v);
            } catch (const ContractError&) {
                throw ParseError("'corner_mode' expects nms or planes, got '" + v + "'", 0);
            }
        } else if (key == "plane_tolerance") {
            params.plane_tolerance = to_double(key, v);
        } else if (key == "plane_min_faces") {
            params.plane_min_faces = to_int<std::size_t>(key, v);
        } else if (key == "hull_turn") {
            params.hull_turn = to_double(key, v);
        } else if (key == "corner_reach") {
            params.corner_reach = to_double(key, v);
        } else if (perturb && key == "sparsity_fraction") {
            perturb->sparsity_fraction = to_double(key, v);
        } else if (perturb && key == "noise_sigma") {
            perturb->noise_sigma = to_double(key, v);
        } else if (perturb && key == "seed") {
            perturb->seed = to_int<std::uint64_t>(key, v);
        } else {
            throw ParseError("unknown configuration key '" + key + "'", 0);
        }
    }
    params.validate();
    if (perturb) perturb->validate();
}

void load_config_file(const std::string& path, ReconstructionParams& params, PerturbSpec* perturb) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    apply_config(read_key_values(in), params, perturb);
}

void write_params(const ReconstructionParams& p, std::ostream& out) {
    out << "k = " << p.k << '\n'
        << "nms_radius = " << format_double(p.nms_radius) << '\n'
        << "corner_threshold = " << format_double(p.corner_threshold) << '\n'
        << "wire_scale_threshold = " << format_double(p.wire_scale_threshold) << '\n'
        << "max_straightness_deviation = " << format_double(p.max_straightness_deviation) << '\n'
        << "exclude_boundary_edges = " << (p.exclude_boundary_edges ? "true" : "false") << '\n'
        << "xy_epsilon = " << format_double(p.xy_epsilon) << '\n'
        << "corner_mode = " << to_string(p.corner_mode) << '\n'
        << "plane_tolerance = " << format_double(p.plane_tolerance) << '\n'
        << "plane_min_faces = " << p.plane_min_faces << '\n'
        << "hull_turn = " << format_double(p.hull_turn) << '\n'
        << "corner_reach = " << format_double(p.corner_reach) << '\n';
}

}  // namespace roofwire
