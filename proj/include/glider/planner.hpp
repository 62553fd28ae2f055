#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glider/dynamics.hpp"
#include "glider/flowfield.hpp"
#include "glider/geometry.hpp"
#include "glider/steering.hpp"

namespace glider {

enum class SamplingMode { lattice, random };
enum class SteeringMethod { streamline, baseline };

const char* to_string(SteeringMethod m);
SteeringMethod parse_method(const std::string& name);

struct Scenario {
  Box bounds{{-500.0, -500.0, -300.0}, {500.0, 500.0, 0.0}};
  Position3 start{-450.0, 450.0, 0.0};
  Position3 goal{450.0, -450.0, 0.0};
  std::size_t n_positions = 1024;
  std::size_t n_controls = 16;
  std::size_t k_neighbors = 27;
  SamplingMode sampling = SamplingMode::lattice;
  std::uint64_t position_seed = 0;
  double dt = 5.0;
  std::size_t steps = 125;
  double tol = 5.0;
  ControlSampling control_sampling = ControlSampling::grid;
  std::uint64_t control_seed = 0;
  SteeringMethod method = SteeringMethod::streamline;

  /// Throws InvalidInput if the invariants do not hold.
  void validate() const;
  SteerParams steer_params() const;
};

/// (nx, ny, nz) with nx * ny * nz == n whose cell spacings over `extent` are
/// as close to isotropic as possible.
std::array<std::size_t, 3> lattice_shape(std::size_t n, Position3 extent);

/// Planner nodes: lattice cell centres or seeded uniform draws, followed by
/// the start and the goal.
std::vector<Position3> sample_positions(const Scenario& scenario);

/// Directed steering attempts: every unordered pair {i, j} where one is among
/// the other's k nearest neighbours, in both directions, sorted.
std::vector<std::pair<std::size_t, std::size_t>> neighbour_attempts(const std::vector<Position3>& nodes,
                                                                    std::size_t k);

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  TrimState trim;
  ControlVector control;
  double travel_time = 0.0;
  double miss_distance = 0.0;
};

struct Roadmap {
  std::vector<Position3> nodes;
  std::vector<Edge> edges;  // sorted by (from, to)
  std::size_t start = 0;
  std::size_t goal = 0;
};

struct RoadmapMetrics {
  std::size_t neighbour_pairs = 0;     // directed pairs from the k-NN graph
  std::size_t equal_depth_skips = 0;
  std::size_t degenerate_skips = 0;    // vertically stacked pairs (no control plane)
  std::size_t edges_attempted = 0;     // pairs handed to the steering function
  std::size_t infeasible_skips = 0;    // rejected by the lowest-speed test
  std::size_t edges_connected = 0;
  std::size_t integrations = 0;
  double sampling_seconds = 0.0;
  double steering_seconds = 0.0;
  double search_seconds = 0.0;
};

/// One steering attempt, for any method.
std::optional<SteerResult> steer_with(SteeringMethod method, const FlowField2p5& field, const GliderModel& model,
                                      Position3 from, Position3 to, const SteerParams& params,
                                      SteerStats* stats = nullptr);

/// OpenMP roadmap construction. `workers` <= 0 uses the OpenMP default.
/// Output is independent of the worker count.
Roadmap build_roadmap(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model,
                      RoadmapMetrics& metrics, int workers = 0);

/// Single-threaded reference for build_roadmap.
Roadmap build_roadmap_serial(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model,
                             RoadmapMetrics& metrics);

struct Plan {
  std::vector<std::size_t> node_path;
  std::vector<Position3> positions;
  std::vector<Edge> legs;
  std::vector<Trajectory> trajectories;  // filled by attach_trajectories
  double total_time = 0.0;
};

/// Dijkstra on travel time. nullopt when the goal is unreachable.
std::optional<Plan> shortest_path(const Roadmap& roadmap, std::size_t start, std::size_t goal);

/// Re-integrates every leg's stored control; the arrival time of each
/// re-simulation is checked against the stored edge weight.
void attach_trajectories(Plan& plan, const FlowField2p5& field, const SteerParams& params);

struct PlanOutcome {
  Roadmap roadmap;
  RoadmapMetrics metrics;
  std::optional<Plan> plan;
};

PlanOutcome plan(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model, int workers = 0);

/// Worker count from GLIDER_WORKERS, or 0 when unset.
int workers_from_env();

}  // namespace glider
