#pragma once

#include <optional>
#include <string>
#include <vector>

#include "generation.hpp"
#include "types.hpp"

namespace crl {

// Deterministic two-cause scene: a rod hanging from a pivot and a point
// light; shadow length and position on the floor are the two effects.
struct PendulumScene {
    double pendulum_angle = 0.0;  // degrees in [-45, 45], 0 = vertical
    double light_angle = 90.0;    // degrees in [60, 120], 90 = overhead
    double shadow_length = 0.0;   // scene units
    double shadow_position = 0.0; // scene units, midpoint of the shadow span
    BinaryMask raster;            // 96 x 96, rod and shadow inked

    PendulumScene() : raster(96, 96, std::vector<uint8_t>(96 * 96, 0)) {}
};

PendulumScene render_pendulum(double pendulum_angle_deg, double light_angle_deg);

// The four-variable DAG realized by the renderer.
CausalGraph pendulum_graph();

// n seeded scenes paired with their ground-truth counterfactual rasters under
// the given intervention (or the identity when absent). The factual raster
// fills the `generated` slot so the pairs can feed counterfactual_accuracy
// directly as a baseline.
std::vector<CounterfactualCase> pendulum_counterfactual_pairs(
    size_t n, uint64_t seed,
    const std::optional<std::pair<std::string, double>>& intervention);

// Writes factual_NNN.pbm / oracle_NNN.pbm plus a cases.csv index into
// out_dir (created if missing); returns the index path.
std::string write_pendulum_pairs(size_t n, uint64_t seed,
                                 const std::optional<std::pair<std::string, double>>& intervention,
                                 const std::string& out_dir);

}  // namespace crl
