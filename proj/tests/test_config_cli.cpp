#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "roofwire/bench.hpp"
#include "roofwire/config.hpp"
#include "roofwire/error.hpp"

using namespace roofwire;
namespace fs = std::filesystem;

namespace {

ReconstructionParams parse(const std::string& text, PerturbSpec* perturb = nullptr) {
    std::istringstream in(text);
    ReconstructionParams p;
    apply_config(read_key_values(in), p, perturb);
    return p;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ROOFWIRE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_suite(const std::string& dir, std::uint64_t seed) {
    for (const SuiteEntry& e : standard_suite(seed))
        if (e.name == "gable" || e.name == "pyramid") write_suite_entry(dir, e.name, generate_roof(e.spec));
}

}  // namespace

TEST_CASE("key value parsing") {
    std::istringstream in("# comment\nk = 40\n\nnms_radius=3.5   # trailing\nk = 50\n");
    const auto kv = read_key_values(in);
    CHECK(kv.size() == 2);
    CHECK(kv.at("k") == "50");
    CHECK(kv.at("nms_radius") == "3.5");

    std::istringstream bad("k 40\n");
    try {
        read_key_values(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("apply_config sets fields") {
    const ReconstructionParams p = parse(
        "k = 7\nnms_radius = 2\ncorner_threshold = 1.5\nwire_scale_threshold = 0.7\n"
        "max_straightness_deviation = 1.25\nexclude_boundary_edges = true\nxy_epsilon = 0\n"
        "corner_mode = nms\nplane_tolerance = 0.5\nplane_min_faces = 3\nhull_turn = 0.3\ncorner_reach = 2\n");
    CHECK(p.k == 7);
    CHECK(p.nms_radius == 2.0);
    CHECK(p.corner_threshold == 1.5);
    CHECK(p.wire_scale_threshold == 0.7);
    CHECK(p.max_straightness_deviation == 1.25);
    CHECK(p.exclude_boundary_edges);
    CHECK(p.xy_epsilon == 0.0);
    CHECK(p.corner_mode == CornerMode::nms);
    CHECK(p.plane_tolerance == 0.5);
    CHECK(p.plane_min_faces == 3);
    CHECK(p.hull_turn == 0.3);
    CHECK(p.corner_reach == 2.0);
}

TEST_CASE("apply_config rejects bad input") {
    CHECK_THROWS_AS(parse("bogus = 1\n"), ParseError);
    CHECK_THROWS_AS(parse("k = many\n"), ParseError);
    CHECK_THROWS_AS(parse("k = -3\n"), ParseError);
    CHECK_THROWS_AS(parse("exclude_boundary_edges = maybe\n"), ParseError);
    CHECK_THROWS_AS(parse("corner_mode = magic\n"), ParseError);
    CHECK_THROWS_AS(parse("sparsity_fraction = 0.1\n"), ParseError);
    CHECK_THROWS_AS(parse("wire_scale_threshold = 0.3\n"), ContractError);
}

TEST_CASE("perturbation keys") {
    PerturbSpec ps;
    parse("sparsity_fraction = 0.1\nnoise_sigma = 0.25\nseed = 99\n", &ps);
    CHECK(ps.sparsity_fraction == 0.1);
    CHECK(ps.noise_sigma == 0.25);
    CHECK(ps.seed == 99);
}

TEST_CASE("library defaults equal the checked-in config") {
    ReconstructionParams from_file;
    from_file.k = 1;
    from_file.corner_mode = CornerMode::nms;
    load_config_file(ROOFWIRE_DEFAULT_PARAMS, from_file);
    std::ostringstream a, b;
    write_params(from_file, a);
    write_params(ReconstructionParams{}, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("write_params round trips") {
    ReconstructionParams p;
    p.k = 321;
    p.nms_radius = 1.0 / 3.0;
    p.exclude_boundary_edges = true;
    p.corner_mode = CornerMode::nms;
    std::ostringstream out;
    write_params(p, out);
    const ReconstructionParams back = parse(out.str());
    std::ostringstream again;
    write_params(back, again);
    CHECK(again.str() == out.str());
    CHECK(back.nms_radius == p.nms_radius);
}

TEST_CASE("bench over a suite directory") {
    TempDir dir("roofwire_bench_test");
    write_suite(dir.path.string(), 0);
    const BenchReport r = run_bench(dir.path.string(), ReconstructionParams{}, kDefaultMatchThreshold, 2);
    REQUIRE(r.items.size() == 2);
    CHECK(r.items[0].name == "gable");
    CHECK(r.items[1].name == "pyramid");
    CHECK(r.aggregate.count == 2);
    CHECK(r.aggregate.errors == 0);
    CHECK(r.aggregate.mean.cf1 ==
          doctest::Approx((r.items[0].report->cf1 + r.items[1].report->cf1) / 2).epsilon(1e-12));
    const auto j = to_json(r.aggregate);
    CHECK(j.dump().find("timing") != std::string::npos);

    // missing ground truth is recorded per item
    fs::remove(dir / "pyramid_gt.obj");
    const BenchReport broken = run_bench(dir.path.string(), ReconstructionParams{}, kDefaultMatchThreshold, 1);
    REQUIRE(broken.items.size() == 2);
    CHECK(broken.aggregate.errors == 1);
    CHECK(!broken.items[1].report.has_value());
    CHECK(!broken.items[1].error.empty());
}

TEST_CASE("bench over an empty directory") {
    TempDir dir("roofwire_bench_empty");
    const BenchReport r = run_bench(dir.path.string(), ReconstructionParams{}, kDefaultMatchThreshold, 1);
    CHECK(r.items.empty());
    CHECK(r.aggregate.count == 0);
    CHECK(run_cli("bench --input " + dir.path.string()) == 0);
}

TEST_CASE("cli commands and exit codes") {
    TempDir dir("roofwire_cli_test");
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("reconstruct --input " + (dir / "missing.xyz") + " --output x.obj") == 2);

    CHECK(run_cli("synth --output " + dir.path.string() + " --seed 3") == 0);
    CHECK(fs::exists(dir / "l_gable.xyz"));
    CHECK(fs::exists(dir / "l_gable_gt.obj"));

    CHECK(run_cli("reconstruct --input " + (dir / "gable.xyz") + " --output " + (dir / "gable_pred.obj") +
                  " --dump-candidates " + (dir / "cand.csv")) == 0);
    const Wireframe pred = read_obj_wireframe_file(dir / "gable_pred.obj");
    CHECK(pred.corners.size() >= 4);
    CHECK(fs::file_size(dir / "cand.csv") > 0);

    CHECK(run_cli("eval --pred " + (dir / "gable_pred.obj") + " --gt " + (dir / "gable_gt.obj")) == 0);
    CHECK(run_cli("score --input " + (dir / "hip.xyz") + " --output " + (dir / "hip_scores.csv")) == 0);
    CHECK(fs::exists(dir / "hip_scores.csv"));
    CHECK(run_cli("perturb --input " + (dir / "hip.xyz") + " --output " + (dir / "hip_p.xyz") +
                  " --sparsity 0.05 --noise 0.5 --seed 1") == 0);
    CHECK(read_xyz_file(dir / "hip_p.xyz").size() < read_xyz_file(dir / "hip.xyz").size());

    {
        std::ofstream bad(dir / "bad.conf");
        bad << "no_such_key = 1\n";
    }
    CHECK(run_cli("reconstruct --input " + (dir / "gable.xyz") + " --output " + (dir / "o.obj") + " --params " +
                  (dir / "bad.conf")) != 0);

    // a cloud without ground truth makes bench report a failure
    fs::copy_file(dir / "hip.xyz", dir / "orphan.xyz");
    CHECK(run_cli("bench --input " + dir.path.string() + " --output " + (dir / "bench.jsonl")) == 1);
    std::ifstream lines(dir / "bench.jsonl");
    std::size_t n = 0;
    for (std::string line; std::getline(lines, line);) ++n;
    CHECK(n == 8);  // five suite entries, hip_p, orphan, aggregate
}
