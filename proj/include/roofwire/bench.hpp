#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roofwire/metrics.hpp"
#include "roofwire/reconstruction.hpp"

namespace roofwire {

struct BenchInput {
    std::string name;
    std::optional<PointCloud> cloud;
    std::optional<Wireframe> ground_truth;
    std::string error;  // set when loading failed
};

struct BenchItem {
    std::string name;
    std::optional<EvalReport> report;  // empty on failure
    std::string error;
    double scoring_seconds = 0.0;
    double total_seconds = 0.0;
};

struct BenchAggregate {
    std::size_t count = 0;   // successful items
    std::size_t errors = 0;
    EvalReport mean;         // metric means over successful items (diagnostics unused)
    double scoring_mean_s = 0.0, scoring_p50_s = 0.0, scoring_p90_s = 0.0, scoring_max_s = 0.0;
};

struct BenchReport {
    std::vector<BenchItem> items;  // sorted by name
    BenchAggregate aggregate;
};

// Pairs every <name>.xyz in `suite_dir` with <name>_gt.obj; sorted by name.
std::vector<BenchInput> load_suite(const std::string& suite_dir);

// Reconstructs and evaluates each input on `jobs` workers. Evaluation happens in
// the normalized frame of the input cloud, so `threshold` is in normalized units.
BenchReport run_bench(std::vector<BenchInput> inputs, const ReconstructionParams& params, double threshold,
                      unsigned jobs);
BenchReport run_bench(const std::string& suite_dir, const ReconstructionParams& params, double threshold,
                      unsigned jobs);

// Recomputes the aggregate from the per-item results.
BenchAggregate aggregate_items(const std::vector<BenchItem>& items);

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const BenchItem& item);
nlohmann::json to_json(const BenchAggregate& agg);

}  // namespace roofwire
