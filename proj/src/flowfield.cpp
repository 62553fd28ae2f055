#include "glider/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "glider/error.hpp"
#include "glider/quadrature.hpp"

namespace glider {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double eddy_psi0(const GaussianEddy& e) {
  return e.strength * e.radius * std::exp(0.5) / std::numbers::sqrt2;
}

double gyre_amplitude(const Gyre& g) {
  return g.strength * std::min(g.length_x, g.length_y) / std::numbers::pi;
}

}  // namespace

// Called for every RK4 stage, so it switches on the alternative directly
// rather than going through std::visit.
FlowVector component_velocity(const AnalyticComponent& c, Vec2 p) {
  switch (c.index()) {
    case 0:
      return std::get_if<UniformFlow>(&c)->velocity;
    case 1: {
      const auto& f = *std::get_if<RankineVortex>(&c);
      const double dx = p.x - f.centre.x;
      const double dy = p.y - f.centre.y;
      const double r2 = dx * dx + dy * dy;
      const double k = r2 <= f.radius * f.radius ? f.strength / f.radius : f.strength * f.radius / r2;
      return {-k * dy, k * dx};
    }
    case 2: {
      const auto& f = *std::get_if<GaussianEddy>(&c);
      const double dx = p.x - f.centre.x;
      const double dy = p.y - f.centre.y;
      const double r2 = f.radius * f.radius;
      const double k = 2.0 * eddy_psi0(f) / r2 * std::exp(-(dx * dx + dy * dy) / r2);
      return {-k * dy, k * dx};
    }
    case 3: {
      const auto& f = *std::get_if<Gyre>(&c);
      const double a = gyre_amplitude(f);
      const double kx = std::numbers::pi / f.length_x;
      const double ky = std::numbers::pi / f.length_y;
      const double sx = std::sin(kx * (p.x - f.origin.x));
      const double cx = std::cos(kx * (p.x - f.origin.x));
      const double sy = std::sin(ky * (p.y - f.origin.y));
      const double cy = std::cos(ky * (p.y - f.origin.y));
      return {a * ky * sx * cy, -a * kx * cx * sy};
    }
    default: {
      const auto& f = *std::get_if<Jet>(&c);
      const double s = -f.direction.y * (p.x - f.centre.x) + f.direction.x * (p.y - f.centre.y);
      // sech^2(x) = 4 e / (1 + e)^2 with e = exp(-2|x|), one exp instead of cosh.
      const double e = std::exp(-2.0 * std::abs(s / f.width));
      const double speed = f.strength * 4.0 * e / ((1.0 + e) * (1.0 + e));
      return {speed * f.direction.x, speed * f.direction.y};
    }
  }
}

double component_stream_function(const AnalyticComponent& c, Vec2 p) {
  return std::visit(
      overloaded{
          [p](const UniformFlow& f) { return f.velocity.u * p.y - f.velocity.v * p.x; },
          [p](const RankineVortex& f) {
            const double r = std::hypot(p.x - f.centre.x, p.y - f.centre.y);
            if (r <= f.radius) return -f.strength * r * r / (2.0 * f.radius);
            return -f.strength * f.radius * (0.5 + std::log(r / f.radius));
          },
          [p](const GaussianEddy& f) {
            const double dx = p.x - f.centre.x;
            const double dy = p.y - f.centre.y;
            return eddy_psi0(f) * std::exp(-(dx * dx + dy * dy) / (f.radius * f.radius));
          },
          [p](const Gyre& f) {
            return gyre_amplitude(f) * std::sin(std::numbers::pi * (p.x - f.origin.x) / f.length_x) *
                   std::sin(std::numbers::pi * (p.y - f.origin.y) / f.length_y);
          },
          [p](const Jet& f) {
            const double s = -f.direction.y * (p.x - f.centre.x) + f.direction.x * (p.y - f.centre.y);
            return f.strength * f.width * std::tanh(s / f.width);
          },
      },
      c);
}

double component_peak_speed(const AnalyticComponent& c) {
  return std::visit(overloaded{
                        [](const UniformFlow& f) { return speed(f.velocity); },
                        [](const auto& f) { return std::abs(f.strength); },
                    },
                    c);
}

// --- GridLayer --------------------------------------------------------------

void GridLayer::check_shape() const {
  if (nx == 0 || ny == 0) throw InvalidInput("grid layer has an empty shape");
  if (u.size() != nx * ny || v.size() != nx * ny)
    throw InvalidInput("grid layer expects " + std::to_string(nx * ny) + " samples per component, got u=" +
                       std::to_string(u.size()) + " v=" + std::to_string(v.size()));
  if (!(spacing.x > 0.0) || !(spacing.y > 0.0)) throw InvalidInput("grid spacing must be positive");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i]) || !std::isfinite(v[i])) throw InvalidInput("grid sample " + std::to_string(i) + " is not finite");
}

double GridLayer::max_cell_divergence() const {
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const auto at = [&](const std::vector<double>& f, std::size_t ii, std::size_t jj) { return f[jj * nx + ii]; };
      const double dudx = ((at(u, i + 1, j) + at(u, i + 1, j + 1)) - (at(u, i, j) + at(u, i, j + 1))) / (2.0 * spacing.x);
      const double dvdy = ((at(v, i, j + 1) + at(v, i + 1, j + 1)) - (at(v, i, j) + at(v, i + 1, j))) / (2.0 * spacing.y);
      worst = std::max(worst, std::abs(dudx + dvdy));
    }
  }
  return worst;
}

namespace {

FlowVector grid_velocity(const GridLayer& g, Vec2 p) {
  const auto locate = [](double coord, double origin, double step, std::size_t n, std::size_t& i, double& frac) {
    if (n == 1) {
      i = 0;
      frac = 0.0;
      return;
    }
    const double f = std::clamp((coord - origin) / step, 0.0, static_cast<double>(n - 1));
    i = std::min(static_cast<std::size_t>(f), n - 2);
    frac = f - static_cast<double>(i);
  };
  std::size_t ix = 0, iy = 0;
  double fx = 0.0, fy = 0.0;
  locate(p.x, g.origin.x, g.spacing.x, g.nx, ix, fx);
  locate(p.y, g.origin.y, g.spacing.y, g.ny, iy, fy);
  const std::size_t ix1 = g.nx == 1 ? ix : ix + 1;
  const std::size_t iy1 = g.ny == 1 ? iy : iy + 1;
  const auto bilerp = [&](const std::vector<double>& f) {
    const double f00 = f[iy * g.nx + ix];
    const double f10 = f[iy * g.nx + ix1];
    const double f01 = f[iy1 * g.nx + ix];
    const double f11 = f[iy1 * g.nx + ix1];
    return (1.0 - fy) * ((1.0 - fx) * f00 + fx * f10) + fy * ((1.0 - fx) * f01 + fx * f11);
  };
  return {bilerp(g.u), bilerp(g.v)};
}

}  // namespace

// --- PlanarLayer ------------------------------------------------------------

PlanarLayer::PlanarLayer(AnalyticLayer layer) : data_(std::move(layer)) {}

PlanarLayer::PlanarLayer(GridLayer layer) : data_(std::move(layer)) {
  std::get<GridLayer>(data_).check_shape();
}

FlowVector PlanarLayer::velocity(Vec2 p) const {
  if (const auto* a = analytic()) {
    FlowVector sum;
    for (const auto& c : a->components) sum = sum + component_velocity(c, p);
    return sum;
  }
  return grid_velocity(*grid(), p);
}

double PlanarLayer::stream_function(Vec2 p) const {
  const auto* a = analytic();
  if (a == nullptr) throw InvalidInput("grid layers have no closed-form stream function");
  double sum = 0.0;
  for (const auto& c : a->components) sum += component_stream_function(c, p);
  return sum;
}

double PlanarLayer::speed_bound() const {
  if (const auto* a = analytic()) {
    double sum = 0.0;
    for (const auto& c : a->components) sum += component_peak_speed(c);
    return sum;
  }
  const auto& g = *grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.u.size(); ++i) worst = std::max(worst, std::hypot(g.u[i], g.v[i]));
  return worst;
}

// --- PlanarFlow -------------------------------------------------------------

PlanarFlow::PlanarFlow(std::vector<Term> terms) : terms_(std::move(terms)) {}

PlanarFlow PlanarFlow::of(std::shared_ptr<const PlanarLayer> layer) {
  return PlanarFlow({Term{1.0, std::move(layer)}});
}

FlowVector PlanarFlow::velocity(Vec2 p) const {
  FlowVector sum;
  for (const auto& t : terms_) sum = sum + t.weight * t.layer->velocity(p);
  return sum;
}

bool PlanarFlow::has_stream_function() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.layer->has_stream_function(); });
}

double PlanarFlow::stream_value(Vec2 a, Vec2 b) const {
  if (!is_finite(a) || !is_finite(b)) throw InvalidInput("stream_value: non-finite endpoint");
  if (a == b) return 0.0;
  if (!has_stream_function()) return quadrature_stream_value(a, b);
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight * (t.layer->stream_function(b) - t.layer->stream_function(a));
  return sum;
}

double PlanarFlow::quadrature_stream_value(Vec2 a, Vec2 b) const {
  if (!is_finite(a) || !is_finite(b)) throw InvalidInput("stream_value: non-finite endpoint");
  const auto& rule = gauss_legendre<32>();
  const Vec2 d = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    const FlowVector f = velocity(a + s * d);
    sum += rule.weights[i] * (f.u * d.y - f.v * d.x);
  }
  return 0.5 * sum;
}

double PlanarFlow::speed_bound() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::abs(t.weight) * t.layer->speed_bound();
  return sum;
}

// --- FlowField2p5 -----------------------------------------------------------

FlowField2p5::FlowField2p5(std::vector<DepthLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidInput("flow field needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!layers_[i].layer) throw InvalidInput("layer " + std::to_string(i) + " is null");
    if (!std::isfinite(layers_[i].z)) throw InvalidInput("layer " + std::to_string(i) + " has a non-finite depth");
    if (i > 0 && !(layers_[i].z < layers_[i - 1].z))
      throw InvalidInput("layer depths must be strictly decreasing (layer " + std::to_string(i) + ")");
  }
}

FlowVector FlowField2p5::velocity(Position3 p) const {
  if (!is_finite(p)) throw InvalidInput("eval_flow: non-finite position");
  const Vec2 h = p.horizontal();
  if (p.z >= layers_.front().z) return layers_.front().layer->velocity(h);
  if (p.z <= layers_.back().z) return layers_.back().layer->velocity(h);
  std::size_t i = 0;
  while (layers_[i + 1].z > p.z) ++i;
  const auto& upper = layers_[i];
  const auto& lower = layers_[i + 1];
  const double w = (upper.z - p.z) / (upper.z - lower.z);
  if (upper.layer == lower.layer) return upper.layer->velocity(h);
  return (1.0 - w) * upper.layer->velocity(h) + w * lower.layer->velocity(h);
}

PlanarFlow FlowField2p5::slice(double z) const {
  if (!std::isfinite(z)) throw InvalidInput("slice: non-finite depth");
  if (z >= layers_.front().z) return PlanarFlow::of(layers_.front().layer);
  if (z <= layers_.back().z) return PlanarFlow::of(layers_.back().layer);
  std::size_t i = 0;
  while (layers_[i + 1].z > z) ++i;
  const auto& upper = layers_[i];
  const auto& lower = layers_[i + 1];
  const double w = (upper.z - z) / (upper.z - lower.z);
  if (upper.layer == lower.layer || w == 0.0) return PlanarFlow::of(upper.layer);
  if (w == 1.0) return PlanarFlow::of(lower.layer);
  return PlanarFlow({{1.0 - w, upper.layer}, {w, lower.layer}});
}

double FlowField2p5::speed_bound() const {
  double worst = 0.0;
  for (const auto& l : layers_) worst = std::max(worst, l.layer->speed_bound());
  return worst;
}

PlanarFlow averaged_layer(const FlowField2p5& field, double z_a, double z_b) {
  if (!std::isfinite(z_a) || !std::isfinite(z_b)) throw InvalidInput("averaged_layer: non-finite depth");
  if (z_a == z_b) throw DegenerateEdge("averaged_layer: identical depths");
  std::vector<PlanarFlow::Term> merged;
  for (const PlanarFlow& s : {field.slice(z_a), field.slice(z_b)}) {
    for (const auto& t : s.terms()) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.layer == t.layer; });
      if (it != merged.end())
        it->weight += 0.5 * t.weight;
      else
        merged.push_back({0.5 * t.weight, t.layer});
    }
  }
  return PlanarFlow(std::move(merged));
}

std::vector<double> divergence_report(const FlowField2p5& field, std::size_t probes, const Box& region,
                                      std::uint64_t seed) {
  if (probes == 0) throw InvalidInput("divergence_report: probes must be >= 1");
  const Position3 ext = region.extent();
  const double h = std::max(1e-4 * std::max(ext.x, ext.y), 1e-6);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(region.lo.x, region.hi.x);
  std::uniform_real_distribution<double> uy(region.lo.y, region.hi.y);
  std::vector<Vec2> points(probes);
  for (auto& p : points) p = {ux(rng), uy(rng)};

  std::vector<double> report;
  report.reserve(field.layers().size());
  for (const auto& layer : field.layers()) {
    double worst = 0.0;
    for (const Vec2 p : points) {
      const double dudx = (layer.layer->velocity({p.x + h, p.y}).u - layer.layer->velocity({p.x - h, p.y}).u) / (2.0 * h);
      const double dvdy = (layer.layer->velocity({p.x, p.y + h}).v - layer.layer->velocity({p.x, p.y - h}).v) / (2.0 * h);
      worst = std::max(worst, std::abs(dudx + dvdy));
    }
    report.push_back(worst);
  }
  return report;
}

void validate_field(const FlowField2p5& field, double grid_tolerance) {
  const auto layers = field.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layers[" + std::to_string(i) + "]";
    if (i > 0 && !(layers[i].z < layers[i - 1].z)) throw LoadError(where, "depths must be strictly decreasing");
    if (const auto* g = layers[i].layer->grid()) {
      try {
        g->check_shape();
      } catch (const InvalidInput& e) {
        throw LoadError(where, e.what());
      }
      const double div = g->max_cell_divergence();
      if (div > grid_tolerance)
        throw LoadError(where, "divergence " + std::to_string(div) + " 1/s exceeds tolerance " +
                                   std::to_string(grid_tolerance));
    }
  }
}

// --- builders ---------------------------------------------------------------

AnalyticLayer uniform(double u, double v) { return {{UniformFlow{{u, v}}}}; }

AnalyticLayer vortex(Vec2 centre, double strength, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("vortex radius must be positive");
  return {{RankineVortex{centre, strength, radius}}};
}

AnalyticLayer eddy(Vec2 centre, double strength, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("eddy radius must be positive");
  return {{GaussianEddy{centre, strength, radius}}};
}

AnalyticLayer gyre(Vec2 origin, double strength, double length_x, double length_y) {
  if (!(length_x > 0.0) || !(length_y > 0.0)) throw InvalidInput("gyre lengths must be positive");
  return {{Gyre{origin, strength, length_x, length_y}}};
}

AnalyticLayer jet(Vec2 centre, double strength, double width, double angle) {
  if (!(width > 0.0)) throw InvalidInput("jet width must be positive");
  return {{Jet{centre, strength, width, {std::cos(angle), std::sin(angle)}}}};
}

AnalyticLayer superposition(std::span<const AnalyticLayer> parts) {
  AnalyticLayer out;
  for (const auto& p : parts) out.components.insert(out.components.end(), p.components.begin(), p.components.end());
  return out;
}

GridLayer sample_to_grid(const PlanarLayer& layer, Vec2 origin, Vec2 spacing, std::size_t nx, std::size_t ny) {
  GridLayer g{origin, spacing, nx, ny, std::vector<double>(nx * ny), std::vector<double>(nx * ny)};
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const FlowVector f = layer.velocity({origin.x + static_cast<double>(i) * spacing.x,
                                           origin.y + static_cast<double>(j) * spacing.y});
      g.u[j * nx + i] = f.u;
      g.v[j * nx + i] = f.v;
    }
  }
  return g;
}

FlowField2p5 depth_uniform(std::shared_ptr<const PlanarLayer> layer, double top, double bottom) {
  return FlowField2p5({{top, layer}, {bottom, layer}});
}

}  // namespace glider
