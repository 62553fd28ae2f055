#include "glider/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "glider/error.hpp"

namespace glider {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

void SweepSpec::validate() const {
  if (controls.empty()) throw InvalidInput("sweep needs at least one control count");
  if (std::any_of(controls.begin(), controls.end(), [](std::size_t c) { return c < 1; }))
    throw InvalidInput("control counts must be >= 1");
  if (seeds.empty()) throw InvalidInput("sweep needs at least one repetition");
  if (methods.empty()) throw InvalidInput("sweep needs at least one method");
}

SweepSpec parse_sweep(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw LoadError("sweep", "expected an object");
  SweepSpec spec;
  try {
    if (!doc.contains("scenario") || !doc.at("scenario").is_string())
      throw LoadError("sweep.scenario", "expected a scenario file path");
    spec.scenario = base_dir / doc.at("scenario").get<std::string>();
    if (doc.contains("controls")) spec.controls = doc.at("controls").get<std::vector<std::size_t>>();
    if (doc.contains("seeds")) {
      spec.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    } else {
      const auto reps = doc.value("repetitions", std::size_t{1});
      for (std::size_t i = 1; i <= reps; ++i) spec.seeds.push_back(i);
    }
    if (doc.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : doc.at("methods")) spec.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("n_positions")) spec.n_positions = doc.at("n_positions").get<std::size_t>();
    if (doc.contains("k_neighbors")) spec.k_neighbors = doc.at("k_neighbors").get<std::size_t>();
    spec.validate();
  } catch (const Json::exception& e) {
    throw LoadError("sweep", e.what());
  } catch (const InvalidInput& e) {
    throw LoadError("sweep", e.what());
  }
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  try {
    return parse_sweep(read_json(path), path.parent_path());
  } catch (const LoadError& e) {
    throw LoadError(path.string(), e.what());
  }
}

MetricsRow metrics_row(const Scenario& scenario, const PlanOutcome& outcome) {
  MetricsRow row;
  row.method = scenario.method;
  row.n_controls = scenario.n_controls;
  row.seed = scenario.control_seed;
  row.n_nodes = outcome.roadmap.nodes.size();
  row.metrics = outcome.metrics;
  row.solved = outcome.plan.has_value();
  if (outcome.plan) {
    row.total_time = outcome.plan->total_time;
    row.legs = outcome.plan->legs.size();
  }
  return row;
}

MetricsRow run_cell(const LoadedScenario& base, SteeringMethod method, std::size_t n_controls, std::uint64_t seed,
                    int workers) {
  Scenario s = base.scenario;
  s.method = method;
  s.n_controls = n_controls;
  s.control_sampling = ControlSampling::random;
  s.control_seed = seed;
  return metrics_row(s, plan(s, *base.field, *base.model, workers));
}

std::vector<MetricsRow> run_sweep(const SweepSpec& spec, const LoadedScenario& scenario, int workers,
                                  const std::function<void(const MetricsRow&)>& on_row,
                                  const std::function<void(const std::string&)>& on_error) {
  spec.validate();
  LoadedScenario base = scenario;
  if (spec.n_positions) base.scenario.n_positions = *spec.n_positions;
  if (spec.k_neighbors) base.scenario.k_neighbors = *spec.k_neighbors;
  std::vector<MetricsRow> rows;
  for (const auto method : spec.methods) {
    for (const auto n : spec.controls) {
      for (const auto seed : spec.seeds) {
        try {
          rows.push_back(run_cell(base, method, n, seed, workers));
          if (on_row) on_row(rows.back());
        } catch (const std::exception& e) {
          if (on_error)
            on_error(std::string(to_string(method)) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                     ": " + e.what());
        }
      }
    }
  }
  return rows;
}

std::string metrics_csv(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  out << "method,n_controls,seed,n_nodes,neighbour_pairs,equal_depth_skips,degenerate_skips,edges_attempted,"
         "infeasible_skips,edges_connected,integrations,solved,total_travel_time_s,legs\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << to_string(r.method) << ',' << r.n_controls << ',' << r.seed << ',' << r.n_nodes << ',' << m.neighbour_pairs
        << ',' << m.equal_depth_skips << ',' << m.degenerate_skips << ',' << m.edges_attempted << ','
        << m.infeasible_skips << ',' << m.edges_connected << ',' << m.integrations << ',' << (r.solved ? 1 : 0) << ','
        << (r.solved ? format_number(r.total_time) : std::string("no-solution")) << ',' << r.legs << '\n';
  }
  return out.str();
}

std::string timings_csv(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  out << "method,n_controls,seed,sampling_s,steering_s,search_s\n";
  for (const auto& r : rows)
    out << to_string(r.method) << ',' << r.n_controls << ',' << r.seed << ',' << format_number(r.metrics.sampling_seconds)
        << ',' << format_number(r.metrics.steering_seconds) << ',' << format_number(r.metrics.search_seconds) << '\n';
  return out.str();
}

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double ci = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    m.ci = 3.0 * m.std / std::sqrt(static_cast<double>(xs.size()));
  }
  return m;
}

}  // namespace

std::vector<SummaryRow> summarise(std::span<const MetricsRow> rows) {
  std::vector<SummaryRow> out;
  std::vector<std::pair<SteeringMethod, std::size_t>> keys;
  for (const auto& r : rows)
    if (std::find(keys.begin(), keys.end(), std::pair{r.method, r.n_controls}) == keys.end())
      keys.emplace_back(r.method, r.n_controls);
  for (const auto& [method, n] : keys) {
    std::vector<double> edges, times;
    for (const auto& r : rows) {
      if (r.method != method || r.n_controls != n) continue;
      edges.push_back(static_cast<double>(r.metrics.edges_connected));
      if (r.solved) times.push_back(r.total_time);
    }
    const Moments e = moments(edges);
    const Moments t = moments(times);
    out.push_back({method, n, edges.size(), times.size(), e.mean, e.std, e.ci, t.mean, t.std, t.ci});
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "method,n_controls,runs,solved_runs,edges_mean,edges_std,edges_ci3,travel_time_mean_s,travel_time_std_s,"
         "travel_time_ci3_s\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << r.n_controls << ',' << r.runs << ',' << r.solved << ','
        << format_number(r.edges_mean) << ',' << format_number(r.edges_std) << ',' << format_number(r.edges_ci) << ',';
    if (r.solved > 0)
      out << format_number(r.time_mean) << ',' << format_number(r.time_std) << ',' << format_number(r.time_ci);
    else
      out << ",,";
    out << '\n';
  }
  return out.str();
}

double control_surface_area(const GliderModel& model) {
  const double r = model.max_speed();
  return 2.0 * 2.0 * std::numbers::pi * r * r * (std::sin(model.gamma_max()) - std::sin(model.gamma_min()));
}

std::optional<double> control_line_length(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                          std::size_t samples) {
  const auto range = feasible_gamma_range(plane, model, dz_sign);
  if (!range) return std::nullopt;
  if (samples < 2) samples = 2;
  const double sign = dz_sign > 0 ? 1.0 : -1.0;
  const double n = plane.normal_length();
  const double v_min = std::abs(plane.c) / n;
  const double foot_u = -plane.c * plane.a / (n * n);
  const double foot_v = -plane.c * plane.b / (n * n);
  const double dir_u = plane.b / n;
  const double dir_v = -plane.a / n;

  double length = 0.0;
  for (const double branch : {1.0, -1.0}) {
    ControlVector prev{};
    for (std::size_t k = 0; k < samples; ++k) {
      // Cosine spacing clusters samples at the ends, where the chord has a
      // square-root profile.
      const double s = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples - 1)));
      const double g = sign * (range->lo + s * (range->hi - range->lo));
      const double speed = model.glider_speed(g);
      const double radius = speed * std::cos(g);
      const double half = std::sqrt(std::max(0.0, (radius - v_min) * (radius + v_min)));
      const ControlVector cur{foot_u + branch * half * dir_u, foot_v + branch * half * dir_v, speed * std::sin(g)};
      if (k > 0) length += std::sqrt((cur.u - prev.u) * (cur.u - prev.u) + (cur.v - prev.v) * (cur.v - prev.v) +
                                     (cur.w - prev.w) * (cur.w - prev.w));
      prev = cur;
    }
  }
  return length;
}

DensityReport density_report(const GliderModel& model, const ControlPlane& plane, int dz_sign, std::size_t c) {
  DensityReport r;
  r.v_min = lowest_plane_speed(plane);
  r.v_star = model.max_horizontal_speed();
  r.surface_area = control_surface_area(model);
  r.rho_surface = static_cast<double>(c) / r.surface_area;
  r.line_length = control_line_length(plane, model, dz_sign);
  if (r.line_length)
    r.rho_line = *r.line_length > 0.0 ? static_cast<double>(c) / *r.line_length
                                      : std::numeric_limits<double>::infinity();
  return r;
}

std::string depth_profile_csv(const Plan& plan, const FlowField2p5& field) {
  if (plan.trajectories.size() != plan.legs.size())
    throw InvalidInput("depth_profile_csv: plan has no attached trajectories");
  std::ostringstream out;
  out << "t_s,depth_m,current_along_mps,leg\n";
  const auto row = [&](double t, Position3 p, const ControlVector& c, std::size_t leg) {
    const FlowVector f = field.velocity(p);
    const double gu = c.u + f.u;
    const double gv = c.v + f.v;
    const double g = std::hypot(gu, gv);
    const double along = g > 0.0 ? (f.u * gu + f.v * gv) / g : 0.0;
    out << format_number(t) << ',' << format_number(0.0 - p.z) << ',' << format_number(along) << ',' << leg << '\n';
  };
  double offset = 0.0;
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const auto& traj = plan.trajectories[i];
    const double arrival = plan.legs[i].travel_time;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
      const auto& s = traj.samples[k];
      if (s.t < arrival) {
        row(offset + s.t, s.p, traj.control, i);
        continue;
      }
      // Close the leg at the arrival time.
      const auto& a = traj.samples[k - 1];
      const double w = (arrival - a.t) / (s.t - a.t);
      row(offset + arrival, a.p + w * (s.p - a.p), traj.control, i);
      break;
    }
    offset += arrival;
  }
  return out.str();
}

}  // namespace glider
