// Command-line front end: plan a scenario, run control-count sweeps, inspect
// fields and report control sample densities.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glider/bench.hpp"
#include "glider/error.hpp"
#include "glider/io.hpp"
#include "glider/planner.hpp"

namespace fs = std::filesystem;
using namespace glider;

namespace {

constexpr int kSolved = 0;
constexpr int kError = 1;
constexpr int kNoSolution = 2;

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
}

int resolve_workers(std::optional<int> flag) { return flag ? *flag : workers_from_env(); }

int run_plan(const fs::path& scenario_path, const std::optional<std::string>& method,
             const std::optional<std::size_t>& controls, const std::optional<std::uint64_t>& seed,
             const fs::path& out_dir, int workers) {
  LoadedScenario loaded = load_scenario(scenario_path);
  Scenario& s = loaded.scenario;
  if (method) s.method = parse_method(*method);
  if (controls) s.n_controls = *controls;
  if (seed) {
    s.control_sampling = ControlSampling::random;
    s.control_seed = *seed;
  }
  s.validate();

  const PlanOutcome outcome = plan(s, *loaded.field, *loaded.model, workers);
  const MetricsRow row = metrics_row(s, outcome);
  fs::create_directories(out_dir);
  write_file(out_dir / "metrics.csv", metrics_csv(std::span(&row, 1)));
  write_file(out_dir / "timings.csv", timings_csv(std::span(&row, 1)));

  const auto& m = outcome.metrics;
  std::cerr << to_string(s.method) << ": " << outcome.roadmap.nodes.size() << " nodes, " << m.edges_connected << "/"
            << m.edges_attempted << " edges connected, " << m.infeasible_skips << " infeasible, "
            << m.steering_seconds << " s steering\n";

  if (!outcome.plan) {
    write_file(out_dir / "plan.json",
               Json{{"solved", false}, {"edges_connected", m.edges_connected}, {"edges_attempted", m.edges_attempted}}
                       .dump(2) +
                   "\n");
    std::cerr << "no path from start to goal\n";
    return kNoSolution;
  }
  write_file(out_dir / "plan.json", plan_to_json(*outcome.plan).dump(2) + "\n");
  write_file(out_dir / "trajectory.json", trajectories_to_json(*outcome.plan).dump() + "\n");
  write_file(out_dir / "depth_profile.csv", depth_profile_csv(*outcome.plan, *loaded.field));
  std::cerr << "travel time " << outcome.plan->total_time << " s over " << outcome.plan->legs.size() << " legs\n";
  return kSolved;
}

int run_sweep_cmd(const fs::path& spec_path, const fs::path& out_dir, int workers) {
  const SweepSpec spec = load_sweep(spec_path);
  const LoadedScenario scenario = load_scenario(spec.scenario);
  bool failures = false;
  const auto rows = run_sweep(
      spec, scenario, workers,
      [](const MetricsRow& r) {
        std::cerr << to_string(r.method) << " n=" << r.n_controls << " seed=" << r.seed
                  << " edges=" << r.metrics.edges_connected
                  << (r.solved ? " time=" + format_number(r.total_time) : std::string(" no-solution")) << "\n";
      },
      [&](const std::string& message) {
        failures = true;
        std::cerr << "cell failed: " << message << "\n";
      });
  fs::create_directories(out_dir);
  write_file(out_dir / "metrics.csv", metrics_csv(rows));
  write_file(out_dir / "timings.csv", timings_csv(rows));
  write_file(out_dir / "summary.csv", summary_csv(summarise(rows)));
  return failures ? kError : kSolved;
}

int run_field_info(const fs::path& field_path, std::size_t probes, std::uint64_t seed) {
  const Json doc = read_json(field_path);
  const FlowField2p5 field = parse_field(doc);
  const Box region = field_extent(doc).value_or(Box{{-500.0, -500.0, 0.0}, {500.0, 500.0, 0.0}});
  const auto divergence = divergence_report(field, probes, region, seed);
  Json layers = Json::array();
  for (std::size_t i = 0; i < field.layers().size(); ++i) {
    const auto& l = field.layers()[i];
    layers.push_back({{"depth", l.z},
                      {"kind", l.layer->has_stream_function() ? "analytic" : "grid"},
                      {"speed_bound_mps", l.layer->speed_bound()},
                      {"max_divergence_per_s", divergence[i]}});
  }
  std::cout << Json{{"layers", layers},
                    {"speed_bound_mps", field.speed_bound()},
                    {"probes", probes},
                    {"region", {region.lo.x, region.lo.y, region.hi.x, region.hi.y}}}
                   .dump(2)
            << "\n";
  return kSolved;
}

int run_density(const fs::path& scenario_path, std::size_t controls) {
  const LoadedScenario loaded = load_scenario(scenario_path);
  const auto nodes = sample_positions(loaded.scenario);
  const auto attempts = neighbour_attempts(nodes, loaded.scenario.k_neighbors);
  std::vector<double> ratios;
  std::size_t considered = 0, infeasible = 0;
  double rho_surface = 0.0;
  for (const auto& [i, j] : attempts) {
    const Position3 a = nodes[i], b = nodes[j];
    if (a.z == b.z || (a.x == b.x && a.y == b.y)) continue;
    ++considered;
    const ControlPlane plane = control_plane(averaged_layer(*loaded.field, a.z, b.z), a, b);
    const DensityReport r = density_report(*loaded.model, plane, b.z > a.z ? 1 : -1, controls);
    rho_surface = r.rho_surface;
    if (!r.rho_line || !feasible(plane, *loaded.model)) {
      ++infeasible;
      continue;
    }
    ratios.push_back(*r.rho_line / r.rho_surface);
  }
  std::sort(ratios.begin(), ratios.end());
  Json out{{"controls", controls},
           {"rho_surface", rho_surface},
           {"surface_area", control_surface_area(*loaded.model)},
           {"pairs", considered},
           {"infeasible_pairs", infeasible}};
  if (!ratios.empty()) {
    out["rho_line_over_rho_surface"] = {{"min", ratios.front()},
                                        {"median", ratios[ratios.size() / 2]},
                                        {"max", ratios.back()}};
  } else {
    out["rho_line_over_rho_surface"] = nullptr;
  }
  std::cout << out.dump(2) << "\n";
  return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streamline-based steering and roadmap planning for underwater gliders"};
  app.require_subcommand(1);
  std::optional<int> workers;
  app.add_option("--workers", workers, "Worker threads (overrides GLIDER_WORKERS)")->check(CLI::NonNegativeNumber);

  auto* plan_cmd = app.add_subcommand("plan", "Build a roadmap and plan from start to goal");
  fs::path scenario;
  std::optional<std::string> method;
  std::optional<std::size_t> controls;
  std::optional<std::uint64_t> seed;
  fs::path out_dir;
  plan_cmd->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--method", method, "streamline or baseline");
  plan_cmd->add_option("--controls", controls, "Control samples per edge")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--seed", seed, "Seed for random control draws (default: deterministic grid)");
  plan_cmd->add_option("--out", out_dir, "Output directory")->required();
  plan_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::NonNegativeNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a control-count sweep");
  fs::path spec;
  sweep_cmd->add_option("--spec", spec, "Sweep JSON")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::NonNegativeNumber);

  auto* field_cmd = app.add_subcommand("field-info", "Report layer speeds and divergence");
  fs::path field_path;
  std::size_t probes = 1000;
  std::uint64_t probe_seed = 0;
  field_cmd->add_option("--field", field_path, "Field JSON")->required()->check(CLI::ExistingFile);
  field_cmd->add_option("--probes", probes, "Random divergence probes")->check(CLI::PositiveNumber);
  field_cmd->add_option("--seed", probe_seed, "Probe seed");

  auto* density_cmd = app.add_subcommand("density", "Control-surface vs control-line sample density");
  std::size_t density_controls = 16;
  density_cmd->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  density_cmd->add_option("--controls", density_controls, "Control samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the error code.
    return app.exit(e) == 0 ? 0 : kError;
  }

  try {
    if (*plan_cmd) return run_plan(scenario, method, controls, seed, out_dir, resolve_workers(workers));
    if (*sweep_cmd) return run_sweep_cmd(spec, out_dir, resolve_workers(workers));
    if (*field_cmd) return run_field_info(field_path, probes, probe_seed);
    if (*density_cmd) return run_density(scenario, density_controls);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
