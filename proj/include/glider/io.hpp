#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "glider/dynamics.hpp"
#include "glider/flowfield.hpp"
#include "glider/planner.hpp"
#include "glider/steering.hpp"

namespace glider {

using Json = nlohmann::json;

/// Layered-field document:
///   {"layers": [{"depth": z, "kind": "uniform"|"vortex"|"eddy"|"gyre"|"jet", ...},
///               {"depth": z, "kind": "superposition", "components": [...]},
///               {"depth": z, "origin": [x0, y0], "spacing": [dx, dy],
///                "shape": [nx, ny], "u": [...], "v": [...]}],
///    "divergence_tolerance": 1e-3}
/// `depth` is the layer's z coordinate (metres, positive up), strictly
/// decreasing down the list. Grid samples are row-major, x fastest.
FlowField2p5 parse_field(const Json& doc);
FlowField2p5 load_field(const std::filesystem::path& path);

/// Optional horizontal extent of a field document ("extent": [x0, y0, x1, y1]),
/// falling back to the union of grid extents.
std::optional<Box> field_extent(const Json& doc);

/// Model document: gamma_min_deg, gamma_max_deg, ballast_max_kg and either
/// "table": [[gamma_deg, speed_mps], ...] or
/// "hydro": {m0_buoyant_kg, m0_heavy_kg, g, lift_poly, drag_poly}.
GliderModel parse_model(const Json& doc);
GliderModel load_model(const std::filesystem::path& path);

struct LoadedScenario {
  Scenario scenario;
  std::shared_ptr<const FlowField2p5> field;
  std::shared_ptr<const GliderModel> model;
};

/// Scenario document with bounds, start, goal, n_positions, n_controls,
/// k_neighbors, sampling {mode, seed}, steering {dt_s, steps, tol_m},
/// controls {mode, seed}, method, and field / model given inline or as a path
/// relative to the scenario file. A missing model means the bundled default.
LoadedScenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir);
LoadedScenario load_scenario(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);

Json to_json(const TrimState& trim);
Json to_json(const ControlVector& c);
Json to_json(const Position3& p);
Json to_json(const Trajectory& t);
Json to_json(const SteerResult& r);

/// plan.json body: positions, trims and per-leg times.
Json plan_to_json(const Plan& plan);
/// trajectory.json body: every sampled point of every leg.
Json trajectories_to_json(const Plan& plan);

}  // namespace glider
