#include "roofwire/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "roofwire/error.hpp"
#include "roofwire/parallel.hpp"

namespace roofwire {

namespace fs = std::filesystem;

std::vector<BenchInput> load_suite(const std::string& suite_dir) {
    std::vector<BenchInput> inputs;
    if (!fs::is_directory(suite_dir)) throw Error("not a directory: '" + suite_dir + "'");
    std::vector<fs::path> clouds;
    for (const auto& entry : fs::directory_iterator(suite_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".xyz") clouds.push_back(entry.path());
    std::sort(clouds.begin(), clouds.end());
    for (const fs::path& p : clouds) {
        BenchInput in;
        in.name = p.stem().string();
        const fs::path gt = p.parent_path() / (in.name + "_gt.obj");
        try {
            in.cloud = read_xyz_file(p.string());
            if (!fs::exists(gt)) throw Error("missing ground truth '" + gt.filename().string() + "'");
            in.ground_truth = read_obj_wireframe_file(gt.string());
        } catch (const std::exception& e) {
            in.error = e.what();
        }
        inputs.push_back(std::move(in));
    }
    return inputs;
}

namespace {

BenchItem run_one(const BenchInput& in, const ReconstructionParams& params, double threshold) {
    BenchItem item;
    item.name = in.name;
    if (!in.error.empty()) {
        item.error = in.error;
        return item;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const ReconstructionResult result = reconstruct_detailed(*in.cloud, params);
        const Wireframe gt = result.transform.apply(*in.ground_truth);
        item.report = evaluate(result.normalized, gt, threshold);
        item.scoring_seconds = result.scoring_seconds;
    } catch (const std::exception& e) {
        item.error = e.what();
    }
    item.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return item;
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

BenchAggregate aggregate_items(const std::vector<BenchItem>& items) {
    BenchAggregate agg;
    std::vector<double> timings;
    EvalReport& m = agg.mean;
    for (const BenchItem& it : items) {
        if (!it.report) {
            ++agg.errors;
            continue;
        }
        ++agg.count;
        const EvalReport& r = *it.report;
        m.wed += r.wed;
        m.aco += r.aco;
        m.cp += r.cp;
        m.cr += r.cr;
        m.cf1 += r.cf1;
        m.ep += r.ep;
        m.er += r.er;
        m.ef1 += r.ef1;
        m.threshold = r.threshold;
        timings.push_back(it.scoring_seconds);
    }
    if (agg.count) {
        const double n = static_cast<double>(agg.count);
        for (double* f : {&m.wed, &m.aco, &m.cp, &m.cr, &m.cf1, &m.ep, &m.er, &m.ef1}) *f /= n;
        double sum = 0.0;
        for (double t : timings) sum += t;
        agg.scoring_mean_s = sum / n;
        agg.scoring_p50_s = percentile(timings, 0.5);
        agg.scoring_p90_s = percentile(timings, 0.9);
        agg.scoring_max_s = *std::max_element(timings.begin(), timings.end());
    }
    return agg;
}

BenchReport run_bench(std::vector<BenchInput> inputs, const ReconstructionParams& params, double threshold,
                      unsigned jobs) {
    std::sort(inputs.begin(), inputs.end(),
              [](const BenchInput& a, const BenchInput& b) { return a.name < b.name; });
    ReconstructionParams per_item = params;
    per_item.threads = 1;
    BenchReport report;
    report.items.resize(inputs.size());
    parallel_for(inputs.size(), std::max(1u, jobs),
                 [&](std::size_t i) { report.items[i] = run_one(inputs[i], per_item, threshold); });
    report.aggregate = aggregate_items(report.items);
    return report;
}

BenchReport run_bench(const std::string& suite_dir, const ReconstructionParams& params, double threshold,
                      unsigned jobs) {
    return run_bench(load_suite(suite_dir), params, threshold, jobs);
}

nlohmann::json to_json(const EvalReport& r) {
    return {{"wed", r.wed},
            {"aco", r.aco},
            {"cp", r.cp},
            {"cr", r.cr},
            {"cf1", r.cf1},
            {"ep", r.ep},
            {"er", r.er},
            {"ef1", r.ef1},
            {"threshold", r.threshold},
            {"match",
             {{"pred_corners", r.pred_corners},
              {"gt_corners", r.gt_corners},
              {"matched_corners", r.matched_corners},
              {"pred_wires", r.pred_wires},
              {"gt_wires", r.gt_wires},
              {"matched_wires", r.matched_wires}}}};
}

nlohmann::json to_json(const BenchItem& item) {
    nlohmann::json j;
    if (item.report) j = to_json(*item.report);
    j["name"] = item.name;
    if (!item.error.empty()) j["error"] = item.error;
    j["timing"] = {{"scoring_s", item.scoring_seconds}, {"total_s", item.total_seconds}};
    return j;
}

nlohmann::json to_json(const BenchAggregate& agg) {
    const EvalReport& m = agg.mean;
    return {{"aggregate",
             {{"count", agg.count},
              {"errors", agg.errors},
              {"wed", m.wed},
              {"aco", m.aco},
              {"cp", m.cp},
              {"cr", m.cr},
              {"cf1", m.cf1},
              {"ep", m.ep},
              {"er", m.er},
              {"ef1", m.ef1},
              {"threshold", m.threshold},
              {"timing",
               {{"scoring_mean_s", agg.scoring_mean_s},
                {"scoring_p50_s", agg.scoring_p50_s},
                {"scoring_p90_s", agg.scoring_p90_s},
                {"scoring_max_s", agg.scoring_max_s}}}}}};
}

}  // namespace roofwire
