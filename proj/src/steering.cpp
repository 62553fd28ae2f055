#include "glider/steering.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "glider/error.hpp"

namespace glider {

namespace {

constexpr std::size_t kRangeScan = 129;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Bisection for the boundary between an infeasible and a feasible |gamma|;
// returns the feasible end of the final bracket.
template <class Pred>
double bisect_boundary(Pred&& is_feasible, double infeasible, double feasible_end) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (infeasible + feasible_end);
    if (mid == infeasible || mid == feasible_end) break;
    (is_feasible(mid) ? feasible_end : infeasible) = mid;
  }
  return feasible_end;
}

struct Candidate {
  double gamma;
  double heading;
  ControlVector control;
};

std::optional<SteerResult> select_fastest(const FlowField2p5& field, const GliderModel& model, Position3 from,
                                          Position3 to, std::span<const Candidate> candidates,
                                          const SteerParams& params, SteerStats* stats) {
  // Depth changes at exactly |w|, so no candidate can enter the tolerance
  // sphere before (|dz| - tol) / |w|. Visiting candidates by that bound lets
  // the loop stop once the bound passes the best arrival. `candidates` comes
  // in tie-break order and its index is the tie-break key.
  const double dz = std::abs(to.z - from.z);
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    order.emplace_back((dz - params.tol) / std::abs(candidates[i].control.w), i);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  std::optional<Arrival> best;
  std::size_t best_index = candidates.size();
  double best_time = std::numeric_limits<double>::infinity();
  for (const auto& [earliest, i] : order) {
    if (earliest > best_time * (1.0 + 1e-12) + 1e-9) break;
    if (stats) ++stats->integrations;
    auto arrival = simulate_edge(field, from, to, candidates[i].control, params, best_time);
    if (arrival && (arrival->arrival_time < best_time || (arrival->arrival_time == best_time && i < best_index))) {
      best_time = arrival->arrival_time;
      best = std::move(arrival);
      best_index = i;
    }
  }
  const Candidate* best_candidate = best ? &candidates[best_index] : nullptr;
  if (!best) return std::nullopt;
  SteerResult result;
  result.trim = model.trim(best_candidate->gamma, best_candidate->heading);
  result.control = best_candidate->control;
  result.trajectory = std::move(best->trajectory);
  result.travel_time = best->arrival_time;
  result.entry_time = best->entry_time;
  result.miss_distance = best->miss_distance;
  return result;
}

void check_pair(Position3 from, Position3 to) {
  if (!is_finite(from) || !is_finite(to)) throw InvalidInput("steer: non-finite position");
  if (from.z == to.z) throw DegenerateEdge("steer: positions share a depth");
}

}  // namespace

double ControlPlane::normal_length() const { return std::hypot(a, b); }

ControlPlane control_plane(const PlanarFlow& flow, Position3 from, Position3 to) {
  if (!is_finite(from) || !is_finite(to)) throw InvalidInput("control_plane: non-finite position");
  if (from.x == to.x && from.y == to.y) throw DegenerateEdge("control_plane: coincident horizontal positions");
  if (from.z == to.z) throw DegenerateEdge("control_plane: positions share a depth");
  ControlPlane plane;
  plane.a = to.y - from.y;
  plane.b = -(to.x - from.x);
  plane.c = flow.stream_value(from.horizontal(), to.horizontal());
  plane.from = from;
  plane.to = to;
  return plane;
}

double lowest_plane_speed(const ControlPlane& plane) { return std::abs(plane.c) / plane.normal_length(); }

bool feasible(const ControlPlane& plane, const GliderModel& model) {
  return lowest_plane_speed(plane) <= model.max_horizontal_speed();
}

std::optional<GammaRange> feasible_gamma_range(const ControlPlane& plane, const GliderModel& model, int dz_sign) {
  if (dz_sign == 0) throw InvalidInput("feasible_gamma_range: dz_sign must be +1 or -1");
  const double sign = dz_sign > 0 ? 1.0 : -1.0;
  const double v_min = lowest_plane_speed(plane);
  const auto ok = [&](double g) { return model.horizontal_speed(sign * g) >= v_min; };

  const double g0 = model.gamma_min();
  const double step = (model.gamma_max() - g0) / static_cast<double>(kRangeScan - 1);
  const auto at = [&](std::size_t i) { return i + 1 == kRangeScan ? model.gamma_max() : g0 + static_cast<double>(i) * step; };

  std::size_t first = kRangeScan, last = kRangeScan;
  double best_h = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < kRangeScan; ++i) {
    const double h = model.horizontal_speed(sign * at(i));
    if (h > best_h) {
      best_h = h;
      best_i = i;
    }
    if (h >= v_min) {
      if (first == kRangeScan) first = i;
      last = i;
    }
  }

  if (first == kRangeScan) {
    // A narrow feasible window can hide between scan points; look at the
    // local maximum before giving up.
    if (best_i == 0 || best_i + 1 == kRangeScan) return std::nullopt;
    double lo = at(best_i - 1), hi = at(best_i + 1);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (model.horizontal_speed(sign * m1) < model.horizontal_speed(sign * m2))
        lo = m1;
      else
        hi = m2;
    }
    const double peak = 0.5 * (lo + hi);
    if (!ok(peak)) return std::nullopt;
    return GammaRange{peak, peak};
  }

  GammaRange range{at(first), at(last)};
  if (first > 0) range.lo = bisect_boundary(ok, at(first - 1), at(first));
  if (last + 1 < kRangeScan) range.hi = bisect_boundary(ok, at(last + 1), at(last));
  return range;
}

std::vector<ControlCandidate> intersect_at(const ControlPlane& plane, const GliderModel& model, double gamma) {
  const double speed = model.glider_speed(gamma);
  const double radius = speed * std::cos(gamma);
  const double n = plane.normal_length();
  const double v_min = std::abs(plane.c) / n;
  if (radius < v_min) return {};
  const double half_chord = std::sqrt((radius - v_min) * (radius + v_min));
  const double n2 = n * n;
  const double foot_u = -plane.c * plane.a / n2;
  const double foot_v = -plane.c * plane.b / n2;
  const double dir_u = plane.b / n;
  const double dir_v = -plane.a / n;
  const double w = speed * std::sin(gamma);

  std::vector<ControlCandidate> out;
  const auto emit = [&](Branch branch, double s) {
    const double u = foot_u + s * half_chord * dir_u;
    const double v = foot_v + s * half_chord * dir_v;
    out.push_back({gamma, branch, std::atan2(v, u), {u, v, w}});
  };
  emit(Branch::plus, 1.0);
  if (half_chord > 0.0) emit(Branch::minus, -1.0);
  return out;
}

namespace {

std::vector<ControlCandidate> candidates_on_range(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                                  const GammaRange& range, std::vector<double> fractions) {
  const double sign = dz_sign > 0 ? 1.0 : -1.0;
  std::vector<double> angles;
  angles.reserve(fractions.size());
  for (const double f : fractions) angles.push_back(range.lo + f * (range.hi - range.lo));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  std::vector<ControlCandidate> out;
  out.reserve(2 * angles.size());
  for (const double g : angles) {
    auto at = intersect_at(plane, model, sign * g);
    out.insert(out.end(), at.begin(), at.end());
  }
  return out;
}

}  // namespace

std::vector<ControlCandidate> parameterized_controls(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                                     std::size_t n) {
  if (n == 0) throw InvalidInput("parameterized_controls: n must be >= 1");
  const auto range = feasible_gamma_range(plane, model, dz_sign);
  if (!range) return {};
  std::vector<double> fractions(n);
  for (std::size_t i = 0; i < n; ++i) fractions[i] = static_cast<double>(i) / static_cast<double>(n);
  return candidates_on_range(plane, model, dz_sign, *range, std::move(fractions));
}

std::vector<ControlCandidate> controls_at_fractions(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                                    std::span<const double> fractions) {
  const auto range = feasible_gamma_range(plane, model, dz_sign);
  if (!range) return {};
  return candidates_on_range(plane, model, dz_sign, *range, {fractions.begin(), fractions.end()});
}

Trajectory integrate(const FlowField2p5& field, Position3 start, const ControlVector& control, double dt,
                     std::size_t steps, const std::optional<Box>& bounds) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("integrate: dt must be positive");
  if (steps == 0) throw InvalidInput("integrate: steps must be >= 1");
  if (!is_finite(start)) throw InvalidInput("integrate: non-finite start");
  Trajectory traj;
  traj.control = control;
  traj.samples.reserve(steps + 1);
  traj.samples.push_back({0.0, start});
  const Position3 c{control.u, control.v, control.w};
  const auto rate = [&](Position3 p) {
    const FlowVector f = field.velocity(p);
    return Position3{c.x + f.u, c.y + f.v, c.z};
  };
  Position3 p = start;
  for (std::size_t i = 0; i < steps; ++i) {
    const Position3 k1 = rate(p);
    const Position3 k2 = rate(p + (0.5 * dt) * k1);
    const Position3 k3 = rate(p + (0.5 * dt) * k2);
    const Position3 k4 = rate(p + dt * k3);
    p = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!is_finite(p)) throw IntegrationError("integrate: state became non-finite");
    traj.samples.push_back({static_cast<double>(i + 1) * dt, p});
    if (bounds && !bounds->contains(p)) {
      traj.exited_bounds = true;
      break;
    }
  }
  return traj;
}

std::optional<Arrival> simulate_edge(const FlowField2p5& field, Position3 start, Position3 target,
                                     const ControlVector& control, const SteerParams& params, double give_up_after) {
  if (!(params.dt > 0.0) || params.steps == 0) throw InvalidInput("simulate_edge: bad step parameters");
  const double tol = params.tol;
  const double dz = target.z - start.z;
  if (control.w == 0.0 || sign_of(control.w) != sign_of(dz)) return std::nullopt;
  if (distance(start, target) <= tol) return std::nullopt;

  // Depth moves at exactly |w|, so the sphere can only be met inside
  // [(|dz| - tol) / |w|, (|dz| + tol) / |w|].
  const double speed_z = std::abs(control.w);
  const double horizon = static_cast<double>(params.steps) * params.dt;
  if ((std::abs(dz) - tol) / speed_z > horizon) return std::nullopt;
  const double t_last = (std::abs(dz) + tol) / speed_z;
  const auto n_steps = std::min<std::size_t>(params.steps, static_cast<std::size_t>(std::ceil(t_last / params.dt)));

  Arrival arrival;
  Trajectory& traj = arrival.trajectory;
  traj.control = control;
  traj.samples.reserve(n_steps + 1);
  traj.samples.push_back({0.0, start});

  const Position3 c{control.u, control.v, control.w};
  const double dt = params.dt;
  const auto rate = [&](Position3 p) {
    const FlowVector f = field.velocity(p);
    return Position3{c.x + f.u, c.y + f.v, c.z};
  };

  bool entered = false;
  double best_d = std::numeric_limits<double>::infinity();
  Position3 p = start;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    if (!entered && t0 >= give_up_after) break;
    const Position3 k1 = rate(p);
    const Position3 k2 = rate(p + (0.5 * dt) * k1);
    const Position3 k3 = rate(p + (0.5 * dt) * k2);
    const Position3 k4 = rate(p + dt * k3);
    const Position3 next = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!is_finite(next)) throw IntegrationError("simulate_edge: state became non-finite");

    // Linear interpolation inside the step: |d0 + s e|, s in [0, 1].
    const Position3 d0 = p - target;
    const Position3 e = next - p;
    const double ee = e.x * e.x + e.y * e.y + e.z * e.z;
    const double de = d0.x * e.x + d0.y * e.y + d0.z * e.z;
    const double dd = d0.x * d0.x + d0.y * d0.y + d0.z * d0.z;
    if (ee > 0.0) {
      if (!entered) {
        const double cc = dd - tol * tol;
        const double disc = de * de - ee * cc;
        if (disc >= 0.0) {
          const double s = (-de - std::sqrt(disc)) / ee;
          if (s >= 0.0 && s <= 1.0) {
            entered = true;
            arrival.entry_time = t0 + s * dt;
          }
        }
      }
      if (entered) {
        const double s = std::clamp(-de / ee, 0.0, 1.0);
        const double d = std::sqrt(std::max(0.0, dd + 2.0 * s * de + s * s * ee));
        if (d < best_d) {
          best_d = d;
          arrival.arrival_time = t0 + s * dt;
        }
      }
    }
    traj.samples.push_back({t0 + dt, next});
    p = next;
    if (params.bounds && !params.bounds->contains(p)) {
      traj.exited_bounds = true;
      break;
    }
  }
  if (!entered) return std::nullopt;
  traj.reached = true;
  arrival.miss_distance = best_d;
  return arrival;
}

std::optional<SteerResult> steer(const FlowField2p5& field, const GliderModel& model, Position3 from, Position3 to,
                                 const SteerParams& params, SteerStats* stats) {
  check_pair(from, to);
  const PlanarFlow flow = averaged_layer(field, from.z, to.z);
  const ControlPlane plane = control_plane(flow, from, to);
  if (!feasible(plane, model)) {
    if (stats) stats->infeasible = true;
    return std::nullopt;
  }
  const int dz_sign = to.z > from.z ? 1 : -1;

  std::vector<ControlCandidate> on_line;
  if (params.sampling == ControlSampling::grid) {
    on_line = parameterized_controls(plane, model, dz_sign, params.n_controls);
  } else {
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> fractions(params.n_controls);
    for (auto& f : fractions) f = unit(rng);
    on_line = controls_at_fractions(plane, model, dz_sign, fractions);
  }

  std::vector<Candidate> candidates;
  candidates.reserve(on_line.size());
  for (const auto& c : on_line) candidates.push_back({c.gamma, c.heading, c.control});
  if (stats) stats->candidates += candidates.size();
  return select_fastest(field, model, from, to, candidates, params, stats);
}

std::optional<SteerResult> steer_baseline(const FlowField2p5& field, const GliderModel& model, Position3 from,
                                          Position3 to, const SteerParams& params, SteerStats* stats) {
  check_pair(from, to);
  const auto samples = params.sampling == ControlSampling::grid
                           ? sample_control_surface(model, params.n_controls)
                           : random_control_surface(model, params.n_controls, params.seed);
  const int dz_sign = to.z > from.z ? 1 : -1;
  std::vector<Candidate> candidates;
  for (const auto& s : samples)
    if (sign_of(s.gamma) == dz_sign) candidates.push_back({s.gamma, s.heading, s.control});
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (std::abs(x.gamma) != std::abs(y.gamma)) return std::abs(x.gamma) < std::abs(y.gamma);
    return x.heading < y.heading;
  });
  if (stats) stats->candidates += candidates.size();
  return select_fastest(field, model, from, to, candidates, params, stats);
}

double control_stream_value(Position3 from, Position3 to, const ControlVector& control) {
  return (to.y - from.y) * control.u - (to.x - from.x) * control.v;
}

}  // namespace glider
