#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roofwire/point_cloud.hpp"

namespace roofwire {

enum class Archetype { flat, gable, hip, pyramid, l_gable };

std::string to_string(Archetype a);
// Throws ContractError on an unknown name.
Archetype parse_archetype(const std::string& name);

// Footprint spans x in [-width/2, width/2] and y in [0, depth]; eaves sit at z = 0.
// For l_gable, `depth` is the wing width and the second wing runs along +y up to
// `wing_length` (0 selects `width`).
struct RoofSpec {
    Archetype archetype = Archetype::gable;
    double width = 20.0;
    double depth = 10.0;
    double ridge_height = 5.0;
    double wing_length = 0.0;
    std::size_t point_count = 2000;
    // Share of the non-corner points placed at even spacing along the face outlines
    // (eaves, rakes, ridges, hips, valleys); the rest are area samples.
    double feature_fraction = 0.15;
    std::uint64_t seed = 0;

    void validate() const;
};

struct RoofModel {
    PointCloud cloud;
    Wireframe ground_truth;
    std::vector<std::vector<Vec3>> faces;  // planar convex roof faces
};

// Samples the roof faces: the analytic corners, evenly spaced points along every
// face outline segment, and area-weighted uniform samples for the remainder, for
// point_count points in total. The cloud is shuffled with the same seed.
RoofModel generate_roof(const RoofSpec& spec);

struct PerturbSpec {
    double sparsity_fraction = 0.05;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Removes a random anchor point and its nearest neighbours, ceil(fraction * N)
// points in total.
PointCloud perturb_sparsity(const PointCloud& cloud, const PerturbSpec& spec);

// Adds independent N(0, sigma^2) offsets to every coordinate.
PointCloud perturb_noise(const PointCloud& cloud, const PerturbSpec& spec);

struct SuiteEntry {
    std::string name;
    RoofSpec spec;
};

// The five-archetype benchmark suite.
std::vector<SuiteEntry> standard_suite(std::uint64_t seed = 0);

// Cloud and ground truth mapped into the cloud's normalized [0, 256] frame.
RoofModel normalized_model(const RoofModel& model);

// Writes <dir>/<name>.xyz and <dir>/<name>_gt.obj in the normalized frame.
void write_suite_entry(const std::string& dir, const std::string& name, const RoofModel& model);

}  // namespace roofwire
