// roofwire: roof wireframe reconstruction from sparse point clouds.
//
//   roofwire score       --input cloud.xyz --output scores.csv [--edges edges.csv] [--mesh mesh.obj]
//   roofwire reconstruct --input cloud.xyz --output wire.obj [--params p.conf] [--dump-candidates c.csv]
//   roofwire eval        --pred pred.obj --gt gt.obj [--threshold 2.0]     (directories: batch mode)
//   roofwire synth       --output dir [--seed n] [--archetype gable ...]
//   roofwire perturb     --input cloud.xyz --output out.xyz [--sparsity f] [--noise s] [--seed n]
//   roofwire bench       --input suite_dir [--params p.conf] [--threshold t] [--jobs n] [--output lines.jsonl]
//
// Exit codes: 0 success, 1 failure (including per-item bench failures), 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "roofwire/bench.hpp"
#include "roofwire/config.hpp"
#include "roofwire/error.hpp"
#include "roofwire/metrics.hpp"
#include "roofwire/reconstruction.hpp"
#include "roofwire/scoring.hpp"
#include "roofwire/synthbench.hpp"

namespace fs = std::filesystem;
using namespace roofwire;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string input, output, params_file, gt, edges_out, mesh_out, candidates_out;
    double threshold = kDefaultMatchThreshold;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;

    // synth
    std::string archetype, name;
    double width = 0.0, depth = 0.0, ridge = -1.0, wing = 0.0;
    std::size_t points = 0;

    // perturb
    double sparsity = -1.0, noise = -1.0;
    double feature_fraction = -1.0;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

ReconstructionParams load_params(const Options& o, PerturbSpec* perturb = nullptr) {
    ReconstructionParams p;
    if (!o.params_file.empty()) load_config_file(o.params_file, p, perturb);
    p.threads = std::max(1u, o.jobs);
    return p;
}

int cmd_score(const Options& o) {
    const ReconstructionParams params = load_params(o);
    const PointCloud cloud = read_xyz_file(o.input);
    auto [normalized, transform] = normalize_to_range(cloud);
    ScoringOptions so;
    so.exclude_boundary_edges = params.exclude_boundary_edges;
    so.threads = params.threads;
    const ScoredGraph sg = score_graph(triangulate(normalized, params.xy_epsilon), so);

    auto vout = open_output(o.output);
    write_vertex_scores_csv(sg, vout);
    std::string edges = o.edges_out;
    if (edges.empty()) {
        fs::path p(o.output);
        edges = (p.parent_path() / (p.stem().string() + "_edges.csv")).string();
    }
    auto eout = open_output(edges);
    write_edge_angles_csv(sg, eout);
    if (!o.mesh_out.empty()) {
        DelaunayGraph mesh = sg.graph;
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v) mesh.vertices[v] = cloud[mesh.source_index[v]];
        auto mout = open_output(o.mesh_out);
        write_obj_mesh(mesh, mout);
    }
    std::cerr << sg.vertex_count() << " vertices, " << sg.graph.edges.size() << " edges, "
              << sg.graph.faces.size() << " faces\n";
    return kExitOk;
}

int cmd_reconstruct(const Options& o) {
    const ReconstructionParams params = load_params(o);
    const PointCloud cloud = read_xyz_file(o.input);
    const ReconstructionResult result = reconstruct_detailed(cloud, params);
    write_obj_wireframe_file(result.wireframe, o.output);
    if (!o.candidates_out.empty()) {
        auto out = open_output(o.candidates_out);
        write_candidates_csv(result, out);
    }
    std::cerr << result.wireframe.corners.size() << " corners, " << result.wireframe.wires.size()
              << " wires\n";
    return kExitOk;
}

int cmd_eval(const Options& o) {
    if (fs::is_directory(o.input) && fs::is_directory(o.gt)) {
        std::vector<fs::path> preds;
        for (const auto& e : fs::directory_iterator(o.input))
            if (e.is_regular_file() && e.path().extension() == ".obj") preds.push_back(e.path());
        std::sort(preds.begin(), preds.end());
        std::vector<BenchItem> items;
        for (const fs::path& p : preds) {
            BenchItem item;
            item.name = p.stem().string();
            fs::path gt = fs::path(o.gt) / (item.name + "_gt.obj");
            if (!fs::exists(gt)) gt = fs::path(o.gt) / p.filename();
            try {
                if (!fs::exists(gt)) throw Error("missing ground truth for '" + item.name + "'");
                item.report = evaluate(read_obj_wireframe_file(p.string()), read_obj_wireframe_file(gt.string()),
                                       o.threshold);
            } catch (const std::exception& e) {
                item.error = e.what();
            }
            nlohmann::json line = to_json(item);
            line.erase("timing");
            std::cout << line.dump() << '\n';
            items.push_back(std::move(item));
        }
        const BenchAggregate agg = aggregate_items(items);
        nlohmann::json j = to_json(agg);
        j["aggregate"].erase("timing");
        std::cout << j.dump() << '\n';
        return agg.errors ? kExitFailure : kExitOk;
    }
    const Wireframe pred = read_obj_wireframe_file(o.input);
    const Wireframe gt = read_obj_wireframe_file(o.gt);
    std::cout << to_json(evaluate(pred, gt, o.threshold)).dump(2) << '\n';
    return kExitOk;
}

int cmd_synth(const Options& o) {
    const std::uint64_t seed = o.seed;
    std::vector<SuiteEntry> entries;
    if (o.archetype.empty()) {
        entries = standard_suite(seed);
    } else {
        RoofSpec s;
        s.archetype = parse_archetype(o.archetype);
        if (o.width > 0) s.width = o.width;
        if (o.depth > 0) s.depth = o.depth;
        if (o.ridge >= 0) s.ridge_height = o.ridge;
        if (o.wing > 0) s.wing_length = o.wing;
        if (o.points > 0) s.point_count = o.points;
        s.seed = seed;
        entries.push_back({o.name.empty() ? o.archetype : o.name, s});
    }
    if (o.feature_fraction >= 0)
        for (SuiteEntry& e : entries) e.spec.feature_fraction = o.feature_fraction;
    PerturbSpec ps;
    ps.seed = seed;
    for (const SuiteEntry& e : entries) {
        RoofModel model = normalized_model(generate_roof(e.spec));
        if (o.sparsity > 0) {
            ps.sparsity_fraction = o.sparsity;
            model.cloud = perturb_sparsity(model.cloud, ps);
        }
        if (o.noise > 0) {
            ps.noise_sigma = o.noise;
            model.cloud = perturb_noise(model.cloud, ps);
        }
        const fs::path base(o.output);
        fs::create_directories(base);
        write_xyz_file(model.cloud, (base / (e.name + ".xyz")).string());
        write_obj_wireframe_file(model.ground_truth, (base / (e.name + "_gt.obj")).string());
        std::cerr << "wrote " << e.name << " (" << model.cloud.size() << " points)\n";
    }
    return kExitOk;
}

int cmd_perturb(const Options& o) {
    PerturbSpec ps;
    ps.sparsity_fraction = 0.0;
    ReconstructionParams unused;
    if (!o.params_file.empty()) load_config_file(o.params_file, unused, &ps);
    if (o.sparsity >= 0) ps.sparsity_fraction = o.sparsity;
    if (o.noise >= 0) ps.noise_sigma = o.noise;
    if (o.seed_given) ps.seed = o.seed;
    ps.validate();
    PointCloud cloud = read_xyz_file(o.input);
    if (ps.sparsity_fraction > 0) cloud = perturb_sparsity(cloud, ps);
    cloud = perturb_noise(cloud, ps);
    write_xyz_file(cloud, o.output);
    return kExitOk;
}

int cmd_bench(const Options& o) {
    const ReconstructionParams params = load_params(o);
    const BenchReport report = run_bench(o.input, params, o.threshold, std::max(1u, o.jobs));
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!o.output.empty()) {
        file = open_output(o.output);
        out = &file;
    }
    for (const BenchItem& item : report.items) *out << to_json(item).dump() << '\n';
    *out << to_json(report.aggregate).dump() << '\n';
    if (out != &std::cout) std::cout << to_json(report.aggregate).dump(2) << '\n';
    return report.aggregate.errors ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roof wireframe reconstruction from sparse point clouds"};
    app.require_subcommand(1);
    Options o;

    auto add_params = [&](CLI::App* c) {
        c->add_option("--params", o.params_file, "Key-value parameter file")->check(CLI::ExistingFile);
        c->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* score = app.add_subcommand("score", "Write per-vertex corner scores and per-edge angles");
    score->add_option("--input", o.input, "Input XYZ cloud")->required()->check(CLI::ExistingFile);
    score->add_option("--output", o.output, "Vertex score CSV")->required();
    score->add_option("--edges", o.edges_out, "Edge angle CSV (default: <output>_edges.csv)");
    score->add_option("--mesh", o.mesh_out, "Debug OBJ dump of the triangulation");
    add_params(score);

    auto* rec = app.add_subcommand("reconstruct", "Reconstruct a wireframe from a point cloud");
    rec->add_option("--input", o.input, "Input XYZ cloud")->required()->check(CLI::ExistingFile);
    rec->add_option("--output", o.output, "Output OBJ wireframe")->required();
    rec->add_option("--dump-candidates", o.candidates_out, "Wire candidate CSV");
    add_params(rec);

    auto* ev = app.add_subcommand("eval", "Evaluate a predicted wireframe against ground truth");
    ev->add_option("--pred,--input", o.input, "Predicted OBJ (or directory)")->required()->check(CLI::ExistingPath);
    ev->add_option("--gt", o.gt, "Ground-truth OBJ (or directory)")->required()->check(CLI::ExistingPath);
    ev->add_option("--threshold", o.threshold, "Corner matching distance")->check(CLI::PositiveNumber);

    auto* syn = app.add_subcommand("synth", "Generate synthetic roofs with ground truth");
    syn->add_option("--output", o.output, "Output directory")->required();
    syn->add_option("--seed", o.seed, "Random seed");
    syn->add_option("--archetype", o.archetype, "flat|gable|hip|pyramid|l_gable (default: full suite)");
    syn->add_option("--name", o.name, "Output base name");
    syn->add_option("--width", o.width);
    syn->add_option("--depth", o.depth);
    syn->add_option("--ridge", o.ridge);
    syn->add_option("--wing", o.wing);
    syn->add_option("--points", o.points);
    syn->add_option("--feature-fraction", o.feature_fraction,
                    "Share of non-corner points placed along face outlines");
    syn->add_option("--sparsity", o.sparsity, "Apply localized removal of this fraction");
    syn->add_option("--noise", o.noise, "Apply Gaussian noise (normalized units)");

    auto* per = app.add_subcommand("perturb", "Apply sparsity/noise perturbation to an XYZ cloud");
    per->add_option("--input", o.input, "Input XYZ cloud")->required()->check(CLI::ExistingFile);
    per->add_option("--output", o.output, "Output XYZ cloud")->required();
    per->add_option("--params", o.params_file, "Key-value file with sparsity_fraction/noise_sigma/seed")
        ->check(CLI::ExistingFile);
    per->add_option("--sparsity", o.sparsity, "Fraction removed around a random anchor");
    per->add_option("--noise", o.noise, "Gaussian sigma per coordinate");
    per->add_option("--seed", o.seed, "Random seed")->each([&](const std::string&) { o.seed_given = true; });

    auto* bench = app.add_subcommand("bench", "Reconstruct and evaluate a suite directory");
    bench->add_option("--input", o.input, "Suite directory")->required()->check(CLI::ExistingDirectory);
    bench->add_option("--output", o.output, "JSON-lines output (default: stdout)");
    bench->add_option("--threshold", o.threshold, "Corner matching distance")->check(CLI::PositiveNumber);
    add_params(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*score) return cmd_score(o);
        if (*rec) return cmd_reconstruct(o);
        if (*ev) return cmd_eval(o);
        if (*syn) return cmd_synth(o);
        if (*per) return cmd_perturb(o);
        if (*bench) return cmd_bench(o);
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
