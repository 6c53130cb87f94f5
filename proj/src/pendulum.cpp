#include "pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "io.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace crl {

namespace {

// Scene geometry (in [0,1] x [0,1] units, floor at y = 0). Invented for this
// toolkit; it realizes the two-causes / two-effects DAG with no confounder.
constexpr double kPi = 3.14159265358979323846;
constexpr double kPivotX = 0.5;
constexpr double kPivotY = 0.9;
constexpr double kRodLength = 0.4;
constexpr double kRodWidth = 0.02;
constexpr double kLightDistance = 1.0;
constexpr int kRasterSize = 96;
constexpr double kMinAngle = -45.0;
constexpr double kMaxAngle = 45.0;
constexpr double kMinLight = 60.0;
constexpr double kMaxLight = 120.0;

double to_radians(double degrees) { return degrees * kPi / 180.0; }

// x where the ray from the light through p hits the floor.
double project_to_floor(double light_x, double light_y, double px, double py) {
    double t = light_y / (light_y - py);
    return light_x + t * (px - light_x);
}

void plot_disk(BinaryMask& mask, double scene_x, double scene_y) {
    int cx = static_cast<int>(std::lround(scene_x * (kRasterSize - 1)));
    int cy = static_cast<int>(std::lround((1.0 - scene_y) * (kRasterSize - 1)));
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx * dx + dy * dy > 1) continue;
            int x = cx + dx;
            int y = cy + dy;
            if (x >= 0 && x < kRasterSize && y >= 0 && y < kRasterSize) mask.set(x, y, true);
        }
    }
}

void draw_segment(BinaryMask& mask, double x0, double y0, double x1, double y1) {
    double length = std::hypot(x1 - x0, y1 - y0);
    int steps = std::max(1, static_cast<int>(std::ceil(length * kRasterSize * 4)));
    for (int s = 0; s <= steps; ++s) {
        double t = static_cast<double>(s) / steps;
        plot_disk(mask, x0 + t * (x1 - x0), y0 + t * (y1 - y0));
    }
}

}  // namespace

PendulumScene render_pendulum(double pendulum_angle_deg, double light_angle_deg) {
    if (pendulum_angle_deg < kMinAngle || pendulum_angle_deg > kMaxAngle) {
        fail(ErrorKind::Argument, "pendulum_angle must lie in [-45, 45] degrees");
    }
    if (light_angle_deg < kMinLight || light_angle_deg > kMaxLight) {
        fail(ErrorKind::Argument, "light_angle must lie in [60, 120] degrees");
    }
    PendulumScene scene;
    scene.pendulum_angle = pendulum_angle_deg;
    scene.light_angle = light_angle_deg;

    double theta = to_radians(pendulum_angle_deg);
    double bob_x = kPivotX + kRodLength * std::sin(theta);
    double bob_y = kPivotY - kRodLength * std::cos(theta);

    double phi = to_radians(light_angle_deg);
    double light_x = kPivotX + kLightDistance * std::cos(phi);
    double light_y = kPivotY + kLightDistance * std::sin(phi);

    double s0 = project_to_floor(light_x, light_y, kPivotX, kPivotY);
    double s1 = project_to_floor(light_x, light_y, bob_x, bob_y);
    double lo = std::min(s0, s1) - 0.5 * kRodWidth;
    double hi = std::max(s0, s1) + 0.5 * kRodWidth;
    scene.shadow_length = hi - lo;
    scene.shadow_position = 0.5 * (lo + hi);

    draw_segment(scene.raster, kPivotX, kPivotY, bob_x, bob_y);
    double clipped_lo = std::clamp(lo, 0.0, 1.0);
    double clipped_hi = std::clamp(hi, 0.0, 1.0);
    if (clipped_lo < clipped_hi) {
        draw_segment(scene.raster, clipped_lo, 0.0, clipped_hi, 0.0);
    }
    return scene;
}

CausalGraph pendulum_graph() {
    std::vector<VariableSpec> vars(4);
    vars[0].name = "pendulum_angle";
    vars[1].name = "light_angle";
    vars[2].name = "shadow_length";
    vars[3].name = "shadow_position";
    return CausalGraph(std::move(vars), {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

std::vector<CounterfactualCase> pendulum_counterfactual_pairs(
    size_t n, uint64_t seed,
    const std::optional<std::pair<std::string, double>>& intervention) {
    if (n == 0) fail(ErrorKind::Argument, "need at least one scene");
    if (intervention) {
        const auto& [name, value] = *intervention;
        if (name != "pendulum_angle" && name != "light_angle") {
            fail(ErrorKind::Argument,
                 "pendulum interventions must target pendulum_angle or light_angle, got '" +
                     name + "'");
        }
        if (name == "pendulum_angle" && (value < kMinAngle || value > kMaxAngle)) {
            fail(ErrorKind::Argument, "pendulum_angle must lie in [-45, 45] degrees");
        }
        if (name == "light_angle" && (value < kMinLight || value > kMaxLight)) {
            fail(ErrorKind::Argument, "light_angle must lie in [60, 120] degrees");
        }
    }
    std::vector<CounterfactualCase> cases;
    cases.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        double angle = Rng::stream(seed, i, 0).next_uniform(kMinAngle, kMaxAngle);
        double light = Rng::stream(seed, i, 1).next_uniform(kMinLight, kMaxLight);
        PendulumScene factual = render_pendulum(angle, light);
        double cf_angle = angle;
        double cf_light = light;
        std::string variable = "identity";
        double value = 0.0;
        if (intervention) {
            variable = intervention->first;
            value = intervention->second;
            (variable == "pendulum_angle" ? cf_angle : cf_light) = value;
        }
        PendulumScene oracle = render_pendulum(cf_angle, cf_light);
        cases.emplace_back(std::move(factual.raster), std::move(oracle.raster), variable, value);
    }
    return cases;
}

std::string write_pendulum_pairs(size_t n, uint64_t seed,
                                 const std::optional<std::pair<std::string, double>>& intervention,
                                 const std::string& out_dir) {
    auto cases = pendulum_counterfactual_pairs(n, seed, intervention);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create directory '" + out_dir + "': " + ec.message());

    std::string index = "generated,oracle,variable,value\n";
    char name[64];
    for (size_t i = 0; i < cases.size(); ++i) {
        std::snprintf(name, sizeof(name), "factual_%03zu.pbm", i);
        std::string factual_name = name;
        std::snprintf(name, sizeof(name), "oracle_%03zu.pbm", i);
        std::string oracle_name = name;
        save_mask(cases[i].generated, out_dir + "/" + factual_name);
        save_mask(cases[i].oracle, out_dir + "/" + oracle_name);
        index += factual_name + "," + oracle_name + "," + cases[i].variable + "," +
                 format_shortest(cases[i].value) + "\n";
    }
    const std::string index_path = out_dir + "/cases.csv";
    write_file(index_path, index);
    return index_path;
}

}  // namespace crl
