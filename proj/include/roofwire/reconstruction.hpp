#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roofwire/point_cloud.hpp"
#include "roofwire/scoring.hpp"

namespace roofwire {

enum class CornerMode {
    nms,       // threshold + non-maximum suppression on the corner score only
    planes,    // intersections of fitted roof planes and outline runs
};

std::string to_string(CornerMode m);
CornerMode parse_corner_mode(const std::string& name);

// Defaults equal config/default_params.conf (checked by the tests).
struct ReconstructionParams {
    std::size_t k = 1000;                           // corner score sampling size
    double nms_radius = 6.0;                        // normalized units
    double corner_threshold = 0.35 * std::numbers::pi;
    double wire_scale_threshold = 0.62;             // on the sigmoid scale
    double max_straightness_deviation = 3.0;        // normalized units
    bool exclude_boundary_edges = false;
    double xy_epsilon = 1e-9;
    CornerMode corner_mode = CornerMode::planes;
    double plane_tolerance = 1.5;                   // max point-plane distance in a roof region
    std::size_t plane_min_faces = 30;               // smaller regions are ignored
    double hull_turn = 0.6;                         // rad; sharper outline turns start a new run
    double corner_reach = 5.0;                      // radius collecting the planes around a vertex
    unsigned threads = 1;

    // Throws ContractError when a field is out of range.
    void validate() const;
};

// Top-min(k, |V|) vertices by corner score, descending; ties by ascending vertex id.
std::vector<std::size_t> corner_score_sampling(const ScoredGraph& sg, std::size_t k);

struct CornerSelection {
    std::vector<Vec3> corners;          // predicted corner positions
    std::vector<std::size_t> snap;      // nearest graph vertex per corner
    std::vector<double> seed_scores;    // corner score of each cluster seed
};

// Greedy non-maximum suppression over the sampled vertices (in score order).
CornerSelection select_corners(const ScoredGraph& sg, std::span<const std::size_t> sampled,
                               const ReconstructionParams& params);

// Corners where at least three independent planes meet. The surface is split into
// planar regions and the hull outline into straight runs (vertical planes); each
// connected group of sampled vertices that sees such planes within corner_reach
// yields the least-squares intersection point. Groups closer than nms_radius merge.
CornerSelection select_plane_corners(const ScoredGraph& sg, std::span<const std::size_t> sampled,
                                     const ReconstructionParams& params);

struct WireCandidate {
    std::size_t i = 0, j = 0;                  // predicted corner indices, i < j
    std::size_t vi = 0, vj = 0;                // snapped graph vertices
    std::optional<double> path_score;
    std::optional<double> scale_factor;        // sigmoid(path_score)
    std::vector<std::size_t> path;             // graph path, empty when absent
};

// Logistic 1 / (1 + exp(-s)) for s in [0, pi].
double query_scale_factor(double path_score);

// All C(M, 2) candidates in (i, j) lexicographic order.
std::vector<WireCandidate> enumerate_wire_candidates(const CornerSelection& corners,
                                                     const ScoredGraph& sg, unsigned threads = 1);

// Keeps candidates with a path, a high enough scale factor and a path that stays
// close to the straight segment between the corners. Sorted wires.
std::vector<Wire> select_wires(std::span<const WireCandidate> candidates, std::span<const Vec3> corners,
                               const ScoredGraph& sg, const ReconstructionParams& params);

// Pluggable selection stages; the defaults wrap select_corners / select_wires.
class CornerSelector {
public:
    virtual ~CornerSelector() = default;
    virtual CornerSelection select(const ScoredGraph& sg, std::span<const std::size_t> sampled) const = 0;
};

class WireSelector {
public:
    virtual ~WireSelector() = default;
    virtual std::vector<Wire> select(std::span<const WireCandidate> candidates,
                                     std::span<const Vec3> corners, const ScoredGraph& sg) const = 0;
};

class NmsCornerSelector final : public CornerSelector {
public:
    explicit NmsCornerSelector(ReconstructionParams params) : params_(params) {}
    CornerSelection select(const ScoredGraph& sg, std::span<const std::size_t> sampled) const override {
        return select_corners(sg, sampled, params_);
    }

private:
    ReconstructionParams params_;
};

class PlaneCornerSelector final : public CornerSelector {
public:
    explicit PlaneCornerSelector(ReconstructionParams params) : params_(params) {}
    CornerSelection select(const ScoredGraph& sg, std::span<const std::size_t> sampled) const override {
        return select_plane_corners(sg, sampled, params_);
    }

private:
    ReconstructionParams params_;
};

class PathScoreWireSelector final : public WireSelector {
public:
    explicit PathScoreWireSelector(ReconstructionParams params) : params_(params) {}
    std::vector<Wire> select(std::span<const WireCandidate> candidates, std::span<const Vec3> corners,
                             const ScoredGraph& sg) const override {
        return select_wires(candidates, corners, sg, params_);
    }

private:
    ReconstructionParams params_;
};

struct ReconstructionResult {
    Wireframe wireframe;                 // original (denormalized) coordinates
    Wireframe normalized;                // same wireframe in the working frame
    NormalizationTransform transform;
    std::vector<WireCandidate> candidates;
    std::vector<bool> accepted;          // per candidate
    std::size_t graph_vertices = 0;
    double scoring_seconds = 0.0;        // triangulation + scoring wall time
};

ReconstructionResult reconstruct_detailed(const PointCloud& cloud, const ReconstructionParams& params,
                                          const CornerSelector* corner_selector = nullptr,
                                          const WireSelector* wire_selector = nullptr);

Wireframe reconstruct(const PointCloud& cloud, const ReconstructionParams& params = {});

// CSV of candidates: i,j,path_score,scale_factor,accepted (empty fields when absent).
void write_candidates_csv(const ReconstructionResult& result, std::ostream& out);

}  // namespace roofwire
