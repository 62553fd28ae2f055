#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "glider/dynamics.hpp"
#include "glider/flowfield.hpp"
#include "glider/geometry.hpp"

namespace glider {

/// Controls (u, v) consistent with a zero superimposed stream value between
/// two positions satisfy A u + B v + C = 0, for any vertical component.
struct ControlPlane {
  double a = 0.0;  // y1 - y0, metres
  double b = 0.0;  // -(x1 - x0), metres
  double c = 0.0;  // stream value of the averaged flow from p0 to p1, m^2/s
  Position3 from;
  Position3 to;

  double residual(double u, double v) const { return a * u + b * v + c; }
  double normal_length() const;
};

/// Throws DegenerateEdge for coincident horizontal positions or equal depths.
ControlPlane control_plane(const PlanarFlow& flow, Position3 from, Position3 to);

/// Smallest horizontal speed on the plane: |C| / sqrt(A^2 + B^2).
double lowest_plane_speed(const ControlPlane& plane);

/// No control on the glider's surface lies on the plane unless the lowest
/// plane speed is at most the maximum horizontal glide speed. Equality counts
/// as feasible.
bool feasible(const ControlPlane& plane, const GliderModel& model);

/// The two line-circle intersections at one glide angle. `plus` offsets the
/// foot of the perpendicular along (+B, -A), `minus` along (-B, +A).
enum class Branch : int { plus = 0, minus = 1 };

struct ControlCandidate {
  double gamma = 0.0;
  Branch branch = Branch::plus;
  double heading = 0.0;
  ControlVector control;
};

/// Sub-range [lo, hi] of |gamma| on the dz_sign branch where the horizontal
/// speed reaches the lowest plane speed. Empty when the plane misses the
/// surface on that branch.
struct GammaRange {
  double lo = 0.0;
  double hi = 0.0;
};
std::optional<GammaRange> feasible_gamma_range(const ControlPlane& plane, const GliderModel& model, int dz_sign);

/// Candidates on the intersection of the control surface and control plane
/// at glide angles |gamma| = lo + i (hi - lo) / n, i = 0..n-1, over the
/// feasible range. Up to two per angle; tangency gives one. Ordered by
/// |gamma|, then branch.
std::vector<ControlCandidate> parameterized_controls(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                                     std::size_t n);

/// Same intersection at explicit positions t in [0, 1] along the feasible
/// range (used for seeded random draws).
std::vector<ControlCandidate> controls_at_fractions(const ControlPlane& plane, const GliderModel& model, int dz_sign,
                                                    std::span<const double> fractions);

/// Intersection at a single glide angle (signed). Empty if the circle misses
/// the line.
std::vector<ControlCandidate> intersect_at(const ControlPlane& plane, const GliderModel& model, double gamma);

struct TrajectorySample {
  double t = 0.0;
  Position3 p;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  ControlVector control;
  bool reached = false;
  bool exited_bounds = false;
};

/// Fixed-step RK4 on dp/dt = control + v_c(p) for `steps` steps, stopping
/// early (with `exited_bounds`) when a sample leaves `bounds`.
Trajectory integrate(const FlowField2p5& field, Position3 start, const ControlVector& control, double dt,
                     std::size_t steps, const std::optional<Box>& bounds = std::nullopt);

enum class ControlSampling { grid, random };

struct SteerParams {
  std::size_t n_controls = 16;
  double dt = 5.0;
  std::size_t steps = 125;
  double tol = 5.0;
  ControlSampling sampling = ControlSampling::grid;
  std::uint64_t seed = 0;
  std::optional<Box> bounds;
};

/// How one fixed control reached a target.
struct Arrival {
  Trajectory trajectory;
  double entry_time = 0.0;     // first entry into the tolerance sphere
  double arrival_time = 0.0;   // closest approach inside the sphere
  double miss_distance = 0.0;  // distance at closest approach
};

/// Integrates `control` from `start` toward `target` and reports the
/// arrival, if the trajectory comes within params.tol of the target.
/// Integration only covers the time window in which the (monotone) depth can
/// be within tol of the target depth, and stops early once `give_up_after`
/// passes without entering the sphere. Deterministic: the same inputs give
/// the same trajectory bit for bit.
std::optional<Arrival> simulate_edge(const FlowField2p5& field, Position3 start, Position3 target,
                                     const ControlVector& control, const SteerParams& params,
                                     double give_up_after = std::numeric_limits<double>::infinity());

struct SteerResult {
  TrimState trim;
  ControlVector control;
  Trajectory trajectory;
  double travel_time = 0.0;
  double entry_time = 0.0;
  double miss_distance = 0.0;
};

struct SteerStats {
  std::size_t candidates = 0;
  std::size_t integrations = 0;
  bool infeasible = false;
};

/// Streamline steering between two positions at different depths. Returns
/// the minimum-travel-time candidate that reaches the target, ties broken by
/// smaller |gamma| and then branch. Infeasible planes return nullopt without
/// integrating anything.
std::optional<SteerResult> steer(const FlowField2p5& field, const GliderModel& model, Position3 from, Position3 to,
                                 const SteerParams& params, SteerStats* stats = nullptr);

/// Brute-force baseline: candidates sampled from the whole control surface,
/// restricted to the glide direction of the pair.
std::optional<SteerResult> steer_baseline(const FlowField2p5& field, const GliderModel& model, Position3 from,
                                          Position3 to, const SteerParams& params, SteerStats* stats = nullptr);

/// Stream value due to a constant control over the displacement p0 -> p1:
/// (y1 - y0) u - (x1 - x0) v.
double control_stream_value(Position3 from, Position3 to, const ControlVector& control);

}  // namespace glider
