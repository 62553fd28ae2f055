#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glider/io.hpp"
#include "glider/planner.hpp"

namespace glider {

/// Control-count sweep: every (method, control count, seed) cell builds
/// a roadmap with seeded random control draws over fixed positions.
struct SweepSpec {
  std::filesystem::path scenario;
  std::vector<std::size_t> controls{16, 54, 100, 200, 400};
  std::vector<std::uint64_t> seeds;
  std::vector<SteeringMethod> methods{SteeringMethod::streamline, SteeringMethod::baseline};
  std::optional<std::size_t> n_positions;  // overrides the scenario
  std::optional<std::size_t> k_neighbors;

  void validate() const;
};

/// {"scenario": path, "controls": [...], "repetitions": r | "seeds": [...],
///  "methods": [...], "n_positions": n, "k_neighbors": k}
SweepSpec parse_sweep(const Json& doc, const std::filesystem::path& base_dir);
SweepSpec load_sweep(const std::filesystem::path& path);

struct MetricsRow {
  SteeringMethod method = SteeringMethod::streamline;
  std::size_t n_controls = 0;
  std::uint64_t seed = 0;
  std::size_t n_nodes = 0;
  RoadmapMetrics metrics;
  bool solved = false;
  double total_time = 0.0;
  std::size_t legs = 0;
};

MetricsRow metrics_row(const Scenario& scenario, const PlanOutcome& outcome);

/// One sweep cell: the scenario with the method, control count and control
/// seed replaced.
MetricsRow run_cell(const LoadedScenario& base, SteeringMethod method, std::size_t n_controls, std::uint64_t seed,
                    int workers = 0);

/// Cells in (method, count, seed) order. Per-cell failures are reported
/// through `on_error` and the sweep continues.
std::vector<MetricsRow> run_sweep(const SweepSpec& spec, const LoadedScenario& scenario, int workers = 0,
                                  const std::function<void(const MetricsRow&)>& on_row = {},
                                  const std::function<void(const std::string&)>& on_error = {});

/// Deterministic columns only; identical inputs give identical bytes.
std::string metrics_csv(std::span<const MetricsRow> rows);
/// Wall-time split per row (sampling, steering, search).
std::string timings_csv(std::span<const MetricsRow> rows);

struct SummaryRow {
  SteeringMethod method = SteeringMethod::streamline;
  std::size_t n_controls = 0;
  std::size_t runs = 0;
  std::size_t solved = 0;
  double edges_mean = 0.0;
  double edges_std = 0.0;
  double edges_ci = 0.0;  // 3 sigma / sqrt(runs)
  double time_mean = 0.0;  // over solved runs
  double time_std = 0.0;
  double time_ci = 0.0;
};

std::vector<SummaryRow> summarise(std::span<const MetricsRow> rows);
std::string summary_csv(std::span<const SummaryRow> rows);

/// Sample densities on the control surface and on the parameterised control
/// line for c control samples.
struct DensityReport {
  double v_min = 0.0;
  double v_star = 0.0;
  double surface_area = 0.0;
  double rho_surface = 0.0;
  std::optional<double> line_length;
  std::optional<double> rho_line;
};

/// Upper bound on the control-surface area: sphere zones of radius
/// max V_G over both glide branches.
double control_surface_area(const GliderModel& model);

/// Arc length in (u, v, w) of the intersection of the plane with the control
/// surface on the dz_sign branch, both intersection branches included.
std::optional<double> control_line_length(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                          std::size_t samples = 4096);

DensityReport density_report(const GliderModel& model, const ControlPlane& plane, int dz_sign, std::size_t c);

/// CSV (t_s, depth_m, current_along_mps, leg) along the plan, with the
/// current projected on the horizontal ground-velocity direction.
std::string depth_profile_csv(const Plan& plan, const FlowField2p5& field);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

}  // namespace glider
