#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "glider/geometry.hpp"

namespace glider {

// Analytic planar flows. Each one is defined by a closed-form stream function
// psi(x, y) with u = d(psi)/dy and v = -d(psi)/dx, so it is divergence free by
// construction. `strength` is always the peak current speed in m/s.

struct UniformFlow {
  FlowVector velocity;
};

/// Solid-body core inside `radius`, irrotational outside. Positive strength
/// rotates counter-clockwise.
struct RankineVortex {
  Vec2 centre;
  double strength = 0.0;
  double radius = 1.0;
};

/// Smooth eddy with psi = Psi0 * exp(-r^2 / radius^2); peak speed is reached at
/// r = radius / sqrt(2).
struct GaussianEddy {
  Vec2 centre;
  double strength = 0.0;
  double radius = 1.0;
};

/// Cellular gyre psi = a * sin(pi (x - x0) / Lx) * sin(pi (y - y0) / Ly).
struct Gyre {
  Vec2 origin;
  double strength = 0.0;
  double length_x = 1.0;
  double length_y = 1.0;
};

/// Straight jet along the unit vector `direction` through `centre`, with a
/// sech^2 cross profile of half-width `width`.
struct Jet {
  Vec2 centre;
  double strength = 0.0;
  double width = 1.0;
  Vec2 direction{1.0, 0.0};
};

using AnalyticComponent = std::variant<UniformFlow, RankineVortex, GaussianEddy, Gyre, Jet>;

FlowVector component_velocity(const AnalyticComponent& c, Vec2 p);
double component_stream_function(const AnalyticComponent& c, Vec2 p);
double component_peak_speed(const AnalyticComponent& c);

/// Superposition of analytic components; stream functions add.
struct AnalyticLayer {
  std::vector<AnalyticComponent> components;
};

/// Regular grid of current samples, row-major with x varying fastest:
/// index = iy * nx + ix. Queries outside the grid clamp to the boundary.
struct GridLayer {
  Vec2 origin;
  Vec2 spacing{1.0, 1.0};
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> u;
  std::vector<double> v;

  /// Throws InvalidInput if the sample arrays do not match the shape.
  void check_shape() const;
  /// Divergence of the bilinear interpolant at every cell centre; max |div|.
  double max_cell_divergence() const;
};

/// One horizontal slice of the current field.
class PlanarLayer {
 public:
  explicit PlanarLayer(AnalyticLayer layer);
  explicit PlanarLayer(GridLayer layer);

  FlowVector velocity(Vec2 p) const;
  bool has_stream_function() const { return std::holds_alternative<AnalyticLayer>(data_); }
  /// Closed-form stream function; only valid when has_stream_function().
  double stream_function(Vec2 p) const;
  /// Upper bound on |v| over the plane.
  double speed_bound() const;

  const AnalyticLayer* analytic() const { return std::get_if<AnalyticLayer>(&data_); }
  const GridLayer* grid() const { return std::get_if<GridLayer>(&data_); }

 private:
  std::variant<AnalyticLayer, GridLayer> data_;
};

struct DepthLayer {
  double z = 0.0;
  std::shared_ptr<const PlanarLayer> layer;
};

/// Weighted combination of planar layers: v(p) = sum_i w_i * v_i(p).
/// Used for single depth slices and for the depth-averaged flow between two
/// depths.
class PlanarFlow {
 public:
  struct Term {
    double weight = 1.0;
    std::shared_ptr<const PlanarLayer> layer;
  };

  PlanarFlow() = default;
  explicit PlanarFlow(std::vector<Term> terms);
  static PlanarFlow of(std::shared_ptr<const PlanarLayer> layer);

  FlowVector velocity(Vec2 p) const;
  bool has_stream_function() const;

  /// psi_c(a, b) = integral from a to b of (u dy - v dx). Closed form when
  /// every term is analytic, 32-point Gauss-Legendre along a->b otherwise.
  double stream_value(Vec2 a, Vec2 b) const;
  /// Always uses quadrature along the straight segment, regardless of terms.
  double quadrature_stream_value(Vec2 a, Vec2 b) const;

  std::span<const Term> terms() const { return terms_; }
  double speed_bound() const;

 private:
  std::vector<Term> terms_;
};

/// Depth-layered horizontal current field with zero vertical component.
/// Layers are ordered by strictly decreasing z (surface first).
class FlowField2p5 {
 public:
  explicit FlowField2p5(std::vector<DepthLayer> layers);

  /// Linear in z between the bracketing layers; z outside the layer span
  /// clamps to the nearest layer. Throws InvalidInput on non-finite input.
  FlowVector velocity(Position3 p) const;

  /// The planar flow at a fixed z, as a combination of at most two layers.
  PlanarFlow slice(double z) const;

  std::span<const DepthLayer> layers() const { return layers_; }
  double top() const { return layers_.front().z; }
  double bottom() const { return layers_.back().z; }
  /// Upper bound on horizontal current speed anywhere.
  double speed_bound() const;

 private:
  std::vector<DepthLayer> layers_;
};

inline FlowVector eval_flow(const FlowField2p5& field, Position3 p) { return field.velocity(p); }

/// v_hat(x, y) = (v(x, y, z_a) + v(x, y, z_b)) / 2. Throws DegenerateEdge when
/// z_a == z_b.
PlanarFlow averaged_layer(const FlowField2p5& field, double z_a, double z_b);

inline double stream_value(const PlanarFlow& flow, Vec2 a, Vec2 b) { return flow.stream_value(a, b); }

/// Central-difference divergence at `probes` seeded uniform points inside the
/// horizontal extent of `region`; one maximum |div v| per layer.
std::vector<double> divergence_report(const FlowField2p5& field, std::size_t probes, const Box& region,
                                      std::uint64_t seed = 0);

/// Depth ordering plus incompressibility: analytic layers pass by
/// construction, grid layers must keep every cell divergence under
/// `grid_tolerance`. Throws LoadError naming the layer.
void validate_field(const FlowField2p5& field, double grid_tolerance = 1e-3);

// Builders for single-component layers.
AnalyticLayer uniform(double u, double v);
AnalyticLayer vortex(Vec2 centre, double strength, double radius);
AnalyticLayer eddy(Vec2 centre, double strength, double radius);
AnalyticLayer gyre(Vec2 origin, double strength, double length_x, double length_y);
AnalyticLayer jet(Vec2 centre, double strength, double width, double angle);
AnalyticLayer superposition(std::span<const AnalyticLayer> parts);

/// Samples an analytic layer onto a grid.
GridLayer sample_to_grid(const PlanarLayer& layer, Vec2 origin, Vec2 spacing, std::size_t nx, std::size_t ny);

/// Field whose every layer is the same planar layer.
FlowField2p5 depth_uniform(std::shared_ptr<const PlanarLayer> layer, double top = 0.0, double bottom = -1000.0);

}  // namespace glider
