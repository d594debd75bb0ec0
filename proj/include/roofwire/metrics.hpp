#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roofwire/point_cloud.hpp"

namespace roofwire {

inline constexpr double kDefaultMatchThreshold = 2.0;

struct CornerPair {
    std::size_t pred = 0;
    std::size_t gt = 0;
    double distance = 0.0;
};

// One-to-one corner correspondence; every pair is within `threshold`.
struct CornerMatching {
    std::vector<CornerPair> pairs;  // sorted by pred index
    double threshold = kDefaultMatchThreshold;

    double total_distance() const;
};

// Maximum-cardinality, then minimum-total-distance assignment restricted to pairs
// at distance <= threshold. The problem is solved in a canonical orientation so
// that swapping the two sides yields the transposed matching.
CornerMatching match_corners(std::span<const Vec3> pred, std::span<const Vec3> gt, double threshold);

struct CornerMetrics {
    double cp = 0.0, cr = 0.0, cf1 = 0.0;  // percent
    double aco = 0.0;                      // mean matched distance
};
CornerMetrics corner_metrics(const CornerMatching& matching, std::size_t n_pred, std::size_t n_gt);

struct EdgeMetrics {
    double ep = 0.0, er = 0.0, ef1 = 0.0;  // percent
    std::size_t true_positives = 0;
};
EdgeMetrics edge_metrics(std::span<const Wire> pred_wires, std::span<const Wire> gt_wires,
                         const CornerMatching& matching);

// (sum of matched corner displacements + length of unmatched GT wires + length of
// unmatched predicted wires) / total GT wire length.
double wireframe_edit_distance(const Wireframe& pred, const Wireframe& gt, const CornerMatching& matching);

struct EvalReport {
    double wed = 0.0, aco = 0.0;
    double cp = 0.0, cr = 0.0, cf1 = 0.0;
    double ep = 0.0, er = 0.0, ef1 = 0.0;

    // diagnostics
    std::size_t pred_corners = 0, gt_corners = 0, matched_corners = 0;
    std::size_t pred_wires = 0, gt_wires = 0, matched_wires = 0;
    double threshold = kDefaultMatchThreshold;
};

EvalReport evaluate(const Wireframe& pred, const Wireframe& gt, double threshold = kDefaultMatchThreshold);

// Harmonic mean of two percentages (0 when both are 0).
double f1_score(double precision, double recall);

}  // namespace roofwire
