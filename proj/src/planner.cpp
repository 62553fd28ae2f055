#include "glider/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <queue>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "glider/error.hpp"

namespace glider {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const char* to_string(SteeringMethod m) { return m == SteeringMethod::streamline ? "streamline" : "baseline"; }

SteeringMethod parse_method(const std::string& name) {
  if (name == "streamline") return SteeringMethod::streamline;
  if (name == "baseline") return SteeringMethod::baseline;
  throw InvalidInput("unknown steering method '" + name + "' (expected streamline or baseline)");
}

void Scenario::validate() const {
  if (!is_finite(bounds.lo) || !is_finite(bounds.hi) || !(bounds.lo.x < bounds.hi.x) ||
      !(bounds.lo.y < bounds.hi.y) || !(bounds.lo.z < bounds.hi.z))
    throw InvalidInput("scenario bounds must be a non-empty finite box");
  if (!bounds.contains(start)) throw InvalidInput("scenario start lies outside the bounds");
  if (!bounds.contains(goal)) throw InvalidInput("scenario goal lies outside the bounds");
  if (n_positions < 2) throw InvalidInput("n_positions must be >= 2");
  if (k_neighbors < 1) throw InvalidInput("k_neighbors must be >= 1");
  if (n_controls < 1) throw InvalidInput("n_controls must be >= 1");
  if (!(dt > 0.0) || steps < 1 || !(tol > 0.0)) throw InvalidInput("steering needs dt > 0, steps >= 1, tol > 0");
}

SteerParams Scenario::steer_params() const {
  SteerParams p;
  p.n_controls = n_controls;
  p.dt = dt;
  p.steps = steps;
  p.tol = tol;
  p.sampling = control_sampling;
  p.seed = control_seed;
  p.bounds = bounds;
  return p;
}

std::array<std::size_t, 3> lattice_shape(std::size_t n, Position3 extent) {
  if (n == 0) throw InvalidInput("lattice_shape: n must be >= 1");
  const std::array<double, 3> ext{extent.x, extent.y, extent.z};
  std::array<std::size_t, 3> best{n, 1, 1};
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t a = 1; a <= n; ++a) {
    if (n % a) continue;
    for (std::size_t b = 1; b <= n / a; ++b) {
      if ((n / a) % b) continue;
      const std::array<std::size_t, 3> dims{a, b, n / a / b};
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      bool ok = true;
      for (int i = 0; i < 3; ++i) {
        if (ext[i] <= 0.0) {
          ok = ok && dims[i] == 1;
          continue;
        }
        const double spacing = ext[i] / static_cast<double>(dims[i]);
        lo = std::min(lo, spacing);
        hi = std::max(hi, spacing);
      }
      if (!ok) continue;
      const double cost = hi / lo;
      if (cost < best_cost) {
        best_cost = cost;
        best = dims;
      }
    }
  }
  return best;
}

std::vector<Position3> sample_positions(const Scenario& scenario) {
  scenario.validate();
  std::vector<Position3> nodes;
  nodes.reserve(scenario.n_positions + 2);
  const Position3 lo = scenario.bounds.lo;
  const Position3 ext = scenario.bounds.extent();
  if (scenario.sampling == SamplingMode::lattice) {
    const auto dims = lattice_shape(scenario.n_positions, ext);
    for (std::size_t k = 0; k < dims[2]; ++k)
      for (std::size_t j = 0; j < dims[1]; ++j)
        for (std::size_t i = 0; i < dims[0]; ++i)
          nodes.push_back({lo.x + (static_cast<double>(i) + 0.5) * ext.x / static_cast<double>(dims[0]),
                           lo.y + (static_cast<double>(j) + 0.5) * ext.y / static_cast<double>(dims[1]),
                           lo.z + (static_cast<double>(k) + 0.5) * ext.z / static_cast<double>(dims[2])});
  } else {
    std::mt19937_64 rng(scenario.position_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < scenario.n_positions; ++i) {
      const double a = unit(rng), b = unit(rng), c = unit(rng);
      nodes.push_back({lo.x + a * ext.x, lo.y + b * ext.y, lo.z + c * ext.z});
    }
  }
  nodes.push_back(scenario.start);
  nodes.push_back(scenario.goal);
  return nodes;
}

std::vector<std::pair<std::size_t, std::size_t>> neighbour_attempts(const std::vector<Position3>& nodes,
                                                                    std::size_t k) {
  const std::size_t n = nodes.size();
  const std::size_t kk = std::min(k, n > 0 ? n - 1 : 0);
  std::vector<std::pair<std::size_t, std::size_t>> attempts;
  attempts.reserve(2 * n * kk);
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Position3 d = nodes[j] - nodes[i];
      order.emplace_back(d.x * d.x + d.y * d.y + d.z * d.z, j);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end());
    for (std::size_t r = 0; r < kk; ++r) {
      attempts.emplace_back(i, order[r].second);
      attempts.emplace_back(order[r].second, i);
    }
  }
  std::sort(attempts.begin(), attempts.end());
  attempts.erase(std::unique(attempts.begin(), attempts.end()), attempts.end());
  return attempts;
}

std::optional<SteerResult> steer_with(SteeringMethod method, const FlowField2p5& field, const GliderModel& model,
                                      Position3 from, Position3 to, const SteerParams& params, SteerStats* stats) {
  return method == SteeringMethod::streamline ? steer(field, model, from, to, params, stats)
                                              : steer_baseline(field, model, from, to, params, stats);
}

namespace {

enum class Outcome : unsigned char { pending, equal_depth, degenerate, infeasible, failed, connected };

struct AttemptSlot {
  Outcome outcome = Outcome::pending;
  std::size_t integrations = 0;
  Edge edge;
};

void run_attempt(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model,
                 const SteerParams& params, const std::vector<Position3>& nodes,
                 std::pair<std::size_t, std::size_t> pair, AttemptSlot& slot) {
  const Position3 from = nodes[pair.first];
  const Position3 to = nodes[pair.second];
  if (from.z == to.z) {
    slot.outcome = Outcome::equal_depth;
    return;
  }
  SteerStats stats;
  std::optional<SteerResult> result;
  try {
    result = steer_with(scenario.method, field, model, from, to, params, &stats);
  } catch (const DegenerateEdge&) {
    slot.outcome = Outcome::degenerate;
    return;
  }
  slot.integrations = stats.integrations;
  if (stats.infeasible) {
    slot.outcome = Outcome::infeasible;
  } else if (!result) {
    slot.outcome = Outcome::failed;
  } else {
    slot.outcome = Outcome::connected;
    slot.edge = {pair.first, pair.second, result->trim, result->control, result->travel_time, result->miss_distance};
  }
}

Roadmap assemble(std::vector<Position3> nodes, const std::vector<AttemptSlot>& slots, RoadmapMetrics& metrics) {
  Roadmap roadmap;
  roadmap.start = nodes.size() - 2;
  roadmap.goal = nodes.size() - 1;
  roadmap.nodes = std::move(nodes);
  metrics.neighbour_pairs = slots.size();
  for (const auto& s : slots) {
    metrics.integrations += s.integrations;
    switch (s.outcome) {
      case Outcome::equal_depth:
        ++metrics.equal_depth_skips;
        break;
      case Outcome::degenerate:
        ++metrics.degenerate_skips;
        break;
      case Outcome::infeasible:
        ++metrics.edges_attempted;
        ++metrics.infeasible_skips;
        break;
      case Outcome::failed:
        ++metrics.edges_attempted;
        break;
      case Outcome::connected:
        ++metrics.edges_attempted;
        ++metrics.edges_connected;
        roadmap.edges.push_back(s.edge);
        break;
      case Outcome::pending:
        break;
    }
  }
  return roadmap;
}

}  // namespace

Roadmap build_roadmap(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model,
                      RoadmapMetrics& metrics, int workers) {
  metrics = {};
  auto t0 = Clock::now();
  auto nodes = sample_positions(scenario);
  const auto attempts = neighbour_attempts(nodes, scenario.k_neighbors);
  metrics.sampling_seconds = seconds_since(t0);

  t0 = Clock::now();
  const SteerParams params = scenario.steer_params();
  std::vector<AttemptSlot> slots(attempts.size());
  std::vector<std::exception_ptr> errors(attempts.size());
  const auto count = static_cast<std::ptrdiff_t>(attempts.size());
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      run_attempt(scenario, field, model, params, nodes, attempts[static_cast<std::size_t>(i)],
                  slots[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)workers;
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  Roadmap roadmap = assemble(std::move(nodes), slots, metrics);
  metrics.steering_seconds = seconds_since(t0);
  return roadmap;
}

Roadmap build_roadmap_serial(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model,
                             RoadmapMetrics& metrics) {
  metrics = {};
  auto t0 = Clock::now();
  auto nodes = sample_positions(scenario);
  const auto attempts = neighbour_attempts(nodes, scenario.k_neighbors);
  metrics.sampling_seconds = seconds_since(t0);

  t0 = Clock::now();
  const SteerParams params = scenario.steer_params();
  std::vector<AttemptSlot> slots(attempts.size());
  for (std::size_t i = 0; i < attempts.size(); ++i) run_attempt(scenario, field, model, params, nodes, attempts[i], slots[i]);
  Roadmap roadmap = assemble(std::move(nodes), slots, metrics);
  metrics.steering_seconds = seconds_since(t0);
  return roadmap;
}

std::optional<Plan> shortest_path(const Roadmap& roadmap, std::size_t start, std::size_t goal) {
  const std::size_t n = roadmap.nodes.size();
  if (start >= n || goal >= n) throw InvalidInput("shortest_path: node index out of range");

  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& e : roadmap.edges) ++offsets[e.from + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::size_t> adjacency(roadmap.edges.size());
  {
    auto fill = offsets;
    for (std::size_t i = 0; i < roadmap.edges.size(); ++i) adjacency[fill[roadmap.edges[i].from]++] = i;
  }

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> via(n, none);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[start] = 0.0;
  open.emplace(0.0, start);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == goal) break;
    for (std::size_t a = offsets[u]; a < offsets[u + 1]; ++a) {
      const Edge& e = roadmap.edges[adjacency[a]];
      const double nd = d + e.travel_time;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        via[e.to] = adjacency[a];
        open.emplace(nd, e.to);
      }
    }
  }
  if (!std::isfinite(dist[goal])) return std::nullopt;

  Plan plan;
  for (std::size_t v = goal; v != start;) {
    const Edge& e = roadmap.edges[via[v]];
    plan.legs.push_back(e);
    v = e.from;
  }
  std::reverse(plan.legs.begin(), plan.legs.end());
  plan.node_path.push_back(start);
  plan.positions.push_back(roadmap.nodes[start]);
  for (const auto& leg : plan.legs) {
    plan.node_path.push_back(leg.to);
    plan.positions.push_back(roadmap.nodes[leg.to]);
    plan.total_time += leg.travel_time;
  }
  return plan;
}

void attach_trajectories(Plan& plan, const FlowField2p5& field, const SteerParams& params) {
  plan.trajectories.clear();
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const auto arrival = simulate_edge(field, plan.positions[i], plan.positions[i + 1], plan.legs[i].control, params);
    if (!arrival || arrival->arrival_time != plan.legs[i].travel_time)
      throw IntegrationError("re-simulated leg " + std::to_string(i) + " does not reproduce its stored arrival");
    plan.trajectories.push_back(arrival->trajectory);
  }
}

PlanOutcome plan(const Scenario& scenario, const FlowField2p5& field, const GliderModel& model, int workers) {
  PlanOutcome out;
  out.roadmap = build_roadmap(scenario, field, model, out.metrics, workers);
  const auto t0 = Clock::now();
  out.plan = shortest_path(out.roadmap, out.roadmap.start, out.roadmap.goal);
  if (out.plan) attach_trajectories(*out.plan, field, scenario.steer_params());
  out.metrics.search_seconds = seconds_since(t0);
  return out;
}

int workers_from_env() {
  const char* value = std::getenv("GLIDER_WORKERS");
  if (value == nullptr || *value == '\0') return 0;
  try {
    return std::max(0, std::stoi(value));
  } catch (const std::exception&) {
    throw InvalidInput(std::string("GLIDER_WORKERS is not an integer: ") + value);
  }
}

}  // namespace glider
