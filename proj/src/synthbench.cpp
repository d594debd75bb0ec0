#include "roofwire/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "roofwire/error.hpp"

namespace roofwire {

std::string to_string(Archetype a) {
    switch (a) {
        case Archetype::flat: return "flat";
        case Archetype::gable: return "gable";
        case Archetype::hip: return "hip";
        case Archetype::pyramid: return "pyramid";
        case Archetype::l_gable: return "l_gable";
    }
    return "unknown";
}

Archetype parse_archetype(const std::string& name) {
    for (Archetype a : {Archetype::flat, Archetype::gable, Archetype::hip, Archetype::pyramid,
                        Archetype::l_gable})
        if (to_string(a) == name) return a;
    throw ContractError("unknown archetype '" + name + "'");
}

void RoofSpec::validate() const {
    if (!(width > 0.0) || !(depth > 0.0)) throw ContractError("footprint dimensions must be positive");
    if (!(ridge_height >= 0.0)) throw ContractError("ridge_height must be non-negative");
    if (point_count < 100) throw ContractError("point_count must be at least 100");
    if (!(feature_fraction >= 0.0 && feature_fraction < 1.0))
        throw ContractError("feature_fraction must lie in [0, 1)");
    if (archetype != Archetype::flat && !(ridge_height > 0.0))
        throw ContractError(to_string(archetype) + " roof needs a positive ridge_height");
    if (archetype == Archetype::hip && !(width > depth))
        throw ContractError("hip roof needs width > depth so the ridge has positive length");
    if (archetype == Archetype::l_gable) {
        const double wing = wing_length > 0.0 ? wing_length : width;
        if (!(width > depth)) throw ContractError("l_gable needs width > depth");
        if (!(wing > depth)) throw ContractError("l_gable needs wing_length > depth");
    }
}

void PerturbSpec::validate() const {
    if (!(sparsity_fraction >= 0.0 && sparsity_fraction < 1.0))
        throw ContractError("sparsity_fraction must lie in [0, 1)");
    if (!(noise_sigma >= 0.0)) throw ContractError("noise_sigma must be non-negative");
}

namespace {

struct Builder {
    RoofModel model;
    std::vector<std::vector<std::size_t>> face_ids;

    std::size_t corner(double x, double y, double z) {
        model.ground_truth.corners.emplace_back(x, y, z);
        return model.ground_truth.corners.size() - 1;
    }
    void wires(std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
        for (auto [a, b] : list) model.ground_truth.wires.push_back(Wire::make(a, b));
    }
    void face(std::initializer_list<std::size_t> ids) {
        face_ids.emplace_back(ids);
        std::vector<Vec3> poly;
        for (std::size_t i : ids) poly.push_back(model.ground_truth.corners[i]);
        model.faces.push_back(std::move(poly));
    }
};

Builder build_geometry(const RoofSpec& s) {
    Builder b;
    const double xl = -s.width / 2.0, xr = s.width / 2.0;
    const double d = s.depth, ym = s.depth / 2.0, h = s.ridge_height;

    switch (s.archetype) {
        case Archetype::flat: {
            const auto c0 = b.corner(xl, 0, 0), c1 = b.corner(xr, 0, 0), c2 = b.corner(xr, d, 0),
                       c3 = b.corner(xl, d, 0);
            b.wires({{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}});
            b.face({c0, c1, c2, c3});
            break;
        }
        case Archetype::gable: {
            const auto c0 = b.corner(xl, 0, 0), c1 = b.corner(xr, 0, 0), c2 = b.corner(xr, d, 0),
                       c3 = b.corner(xl, d, 0);
            const auto r0 = b.corner(xl, ym, h), r1 = b.corner(xr, ym, h);
            b.wires({{c0, c1}, {c2, c3}, {c0, c3}, {c1, c2}, {r0, r1}, {c0, r0}, {c3, r0}, {c1, r1},
                     {c2, r1}});
            b.face({c0, c1, r1, r0});
            b.face({r0, r1, c2, c3});
            break;
        }
        case Archetype::hip: {
            const auto c0 = b.corner(xl, 0, 0), c1 = b.corner(xr, 0, 0), c2 = b.corner(xr, d, 0),
                       c3 = b.corner(xl, d, 0);
            const auto r0 = b.corner(xl + ym, ym, h), r1 = b.corner(xr - ym, ym, h);
            b.wires({{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}, {r0, r1}, {c0, r0}, {c3, r0}, {c1, r1},
                     {c2, r1}});
            b.face({c0, c1, r1, r0});
            b.face({c2, c3, r0, r1});
            b.face({c3, c0, r0});
            b.face({c1, c2, r1});
            break;
        }
        case Archetype::pyramid: {
            const auto c0 = b.corner(xl, 0, 0), c1 = b.corner(xr, 0, 0), c2 = b.corner(xr, d, 0),
                       c3 = b.corner(xl, d, 0);
            const auto apex = b.corner(0, ym, h);
            b.wires({{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}, {c0, apex}, {c1, apex}, {c2, apex},
                     {c3, apex}});
            b.face({c0, c1, apex});
            b.face({c1, c2, apex});
            b.face({c2, c3, apex});
            b.face({c3, c0, apex});
            break;
        }
        case Archetype::l_gable: {
            // Main wing along x over y in [0, d]; second wing along +y over
            // x in [xr - d, xr], joined by two valleys at the ridge junction.
            const double wing = s.wing_length > 0.0 ? s.wing_length : s.width;
            const double xb0 = xr - d, xbm = xr - ym;
            const auto sw = b.corner(xl, 0, 0), se = b.corner(xr, 0, 0);
            const auto rw = b.corner(xl, ym, h), re = b.corner(xr, ym, h);
            const auto nw = b.corner(xl, d, 0);
            const auto valley = b.corner(xb0, d, 0);  // reflex footprint corner
            const auto ne = b.corner(xr, d, 0);
            const auto junction = b.corner(xbm, ym, h);
            const auto tw = b.corner(xb0, wing, 0), tr = b.corner(xbm, wing, h), te = b.corner(xr, wing, 0);
            b.wires({{sw, se}, {nw, valley}, {valley, tw}, {ne, te},       // eaves
                     {sw, nw}, {se, ne}, {tw, te},                         // gable bases
                     {sw, rw}, {rw, nw}, {se, re}, {re, ne}, {tw, tr}, {tr, te},  // rakes
                     {rw, junction}, {junction, re}, {junction, tr},      // ridges
                     {valley, junction}, {ne, junction}});                // valleys
            b.face({sw, se, re, junction, rw});
            b.face({rw, junction, valley, nw});
            b.face({re, ne, junction});
            b.face({valley, junction, tr, tw});
            b.face({ne, te, tr, junction});
            break;
        }
    }
    b.model.ground_truth.canonicalize();
    return b;
}

}  // namespace

RoofModel generate_roof(const RoofSpec& spec) {
    spec.validate();
    const Builder geometry = build_geometry(spec);
    RoofModel model = geometry.model;
    const auto& corners = model.ground_truth.corners;
    if (spec.point_count < corners.size()) throw ContractError("point_count smaller than corner count");

    // Unique outline segments shared between faces.
    std::vector<Wire> segments;
    for (const auto& ids : geometry.face_ids)
        for (std::size_t i = 0; i < ids.size(); ++i) segments.push_back(Wire::make(ids[i], ids[(i + 1) % ids.size()]));
    std::sort(segments.begin(), segments.end());
    segments.erase(std::unique(segments.begin(), segments.end()), segments.end());
    double outline = 0.0;
    for (const Wire& w : segments) outline += (corners[w.b] - corners[w.a]).norm();

    // Fan-triangulate each (convex) face and sample triangles by 3D area.
    struct Tri {
        Vec3 a, b, c;
    };
    std::vector<Tri> tris;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& poly : model.faces) {
        for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
            const Tri t{poly[0], poly[i], poly[i + 1]};
            total += 0.5 * (t.b - t.a).cross(t.c - t.a).norm();
            tris.push_back(t);
            cumulative.push_back(total);
        }
    }

    model.cloud.points.reserve(spec.point_count);
    model.cloud.points.assign(corners.begin(), corners.end());
    const std::size_t free_points = spec.point_count - corners.size();
    const double wanted = spec.feature_fraction * static_cast<double>(free_points);
    if (wanted >= 1.0) {
        const double spacing = outline / (wanted + static_cast<double>(segments.size()));
        for (const Wire& w : segments) {
            const Vec3& a = corners[w.a];
            const Vec3& b = corners[w.b];
            const auto steps = static_cast<std::size_t>(std::max(1.0, std::round((b - a).norm() / spacing)));
            for (std::size_t k = 1; k < steps && model.cloud.size() < spec.point_count; ++k) {
                const double t = static_cast<double>(k) / static_cast<double>(steps);
                model.cloud.points.push_back(a + t * (b - a));  // exact along axis-aligned segments
            }
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t samples = spec.point_count - model.cloud.size();
    for (std::size_t n = 0; n < samples; ++n) {
        const double pick = unit(rng) * total;
        std::size_t ti = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
        ti = std::min(ti, tris.size() - 1);
        const Tri& t = tris[ti];
        const double s = std::sqrt(unit(rng));
        const double r = unit(rng);
        model.cloud.points.push_back((1.0 - s) * t.a + s * (1.0 - r) * t.b + s * r * t.c);
    }
    std::shuffle(model.cloud.points.begin(), model.cloud.points.end(), rng);
    return model;
}

PointCloud perturb_sparsity(const PointCloud& cloud, const PerturbSpec& spec) {
    spec.validate();
    const std::size_t n = cloud.size();
    const auto remove = static_cast<std::size_t>(std::ceil(spec.sparsity_fraction * static_cast<double>(n)));
    if (remove < 1) throw ContractError("sparsity_fraction removes no points");
    if (n < remove + 3) throw ContractError("sparsity perturbation would leave fewer than 3 points");

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t anchor = pick(rng);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = (cloud[i] - cloud[anchor]).squaredNorm();
    // Anchor first, then by distance, then by index.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if ((a == anchor) != (b == anchor)) return a == anchor;
        if (d2[a] != d2[b]) return d2[a] < d2[b];
        return a < b;
    });
    std::vector<char> removed(n, 0);
    for (std::size_t i = 0; i < remove; ++i) removed[order[i]] = 1;

    PointCloud out;
    out.points.reserve(n - remove);
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) out.points.push_back(cloud[i]);
    return out;
}

PointCloud perturb_noise(const PointCloud& cloud, const PerturbSpec& spec) {
    if (!(spec.noise_sigma >= 0.0)) throw ContractError("noise_sigma must be non-negative");
    PointCloud out = cloud;
    if (spec.noise_sigma == 0.0) return out;
    // Decorrelated from the sparsity stream, which uses the raw seed.
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Vec3& p : out.points) {
        p.x() += noise(rng);
        p.y() += noise(rng);
        p.z() += noise(rng);
    }
    return out;
}

std::vector<SuiteEntry> standard_suite(std::uint64_t seed) {
    std::vector<SuiteEntry> suite;
    auto add = [&](const std::string& name, Archetype a, double w, double d, double h, double wing,
                   std::size_t points) {
        RoofSpec s;
        s.archetype = a;
        s.width = w;
        s.depth = d;
        s.ridge_height = h;
        s.wing_length = wing;
        s.point_count = points;
        s.seed = seed + suite.size() + 1;
        suite.push_back({name, s});
    };
    add("flat", Archetype::flat, 20.0, 12.0, 0.0, 0.0, 2500);
    add("gable", Archetype::gable, 20.0, 10.0, 4.0, 0.0, 2500);
    add("hip", Archetype::hip, 24.0, 12.0, 4.0, 0.0, 2500);
    add("pyramid", Archetype::pyramid, 14.0, 14.0, 5.0, 0.0, 2500);
    add("l_gable", Archetype::l_gable, 24.0, 8.0, 4.0, 20.0, 3000);
    return suite;
}

RoofModel normalized_model(const RoofModel& model) {
    auto [cloud, transform] = normalize_to_range(model.cloud);
    RoofModel out;
    out.cloud = std::move(cloud);
    out.ground_truth = transform.apply(model.ground_truth);
    for (const auto& poly : model.faces) {
        std::vector<Vec3> mapped;
        for (const Vec3& p : poly) mapped.push_back(transform.apply(p));
        out.faces.push_back(std::move(mapped));
    }
    return out;
}

void write_suite_entry(const std::string& dir, const std::string& name, const RoofModel& model) {
    std::filesystem::create_directories(dir);
    const RoofModel norm = normalized_model(model);
    const std::filesystem::path base(dir);
    write_xyz_file(norm.cloud, (base / (name + ".xyz")).string());
    write_obj_wireframe_file(norm.ground_truth, (base / (name + "_gt.obj")).string());
}

}  // namespace roofwire
