#include "glider/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "glider/error.hpp"

namespace glider {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw LoadError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(where, std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw LoadError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw LoadError(where, "expected a finite number");
  return d;
}

double number_at(const Json& obj, const char* key, const std::string& where) {
  return number(require(obj, key, where), where + "." + key);
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

std::size_t count_at(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw LoadError(where + "." + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::size_t count_or(const Json& obj, const char* key, std::size_t fallback, const std::string& where) {
  return obj.contains(key) ? count_at(obj, key, where) : fallback;
}

std::vector<double> numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw LoadError(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Vec2 vec2(const Json& v, const std::string& where) {
  const auto xs = numbers(v, where);
  if (xs.size() != 2) throw LoadError(where, "expected [x, y]");
  return {xs[0], xs[1]};
}

Position3 position(const Json& v, const std::string& where) {
  const auto xs = numbers(v, where);
  if (xs.size() != 3) throw LoadError(where, "expected [x, y, z]");
  return {xs[0], xs[1], xs[2]};
}

std::string text(const Json& v, const std::string& where) {
  if (!v.is_string()) throw LoadError(where, "expected a string");
  return v.get<std::string>();
}

AnalyticComponent parse_component(const Json& c, const std::string& kind, const std::string& where) {
  const auto wrap = [&](auto&& make) -> AnalyticComponent {
    try {
      return make();
    } catch (const InvalidInput& e) {
      throw LoadError(where, e.what());
    }
  };
  if (kind == "uniform") return UniformFlow{{number_at(c, "u", where), number_at(c, "v", where)}};
  if (kind == "vortex")
    return wrap([&] {
      return vortex(vec2(require(c, "centre", where), where + ".centre"), number_at(c, "strength", where),
                    number_at(c, "radius", where))
          .components.front();
    });
  if (kind == "eddy")
    return wrap([&] {
      return eddy(vec2(require(c, "centre", where), where + ".centre"), number_at(c, "strength", where),
                  number_at(c, "radius", where))
          .components.front();
    });
  if (kind == "gyre")
    return wrap([&] {
      return gyre(vec2(require(c, "origin", where), where + ".origin"), number_at(c, "strength", where),
                  number_at(c, "length_x", where), number_at(c, "length_y", where))
          .components.front();
    });
  if (kind == "jet")
    return wrap([&] {
      return jet(vec2(require(c, "centre", where), where + ".centre"), number_at(c, "strength", where),
                 number_at(c, "width", where), number_or(c, "angle_deg", 0.0, where) * kDeg)
          .components.front();
    });
  throw LoadError(where, "unknown layer kind '" + kind + "'");
}

PlanarLayer parse_layer(const Json& l, const std::string& where) {
  if (!l.contains("kind") || l.at("kind") == "grid") {
    GridLayer g;
    g.origin = vec2(require(l, "origin", where), where + ".origin");
    g.spacing = vec2(require(l, "spacing", where), where + ".spacing");
    const auto shape = numbers(require(l, "shape", where), where + ".shape");
    if (shape.size() != 2 || shape[0] < 1 || shape[1] < 1 || shape[0] != std::floor(shape[0]) ||
        shape[1] != std::floor(shape[1]))
      throw LoadError(where + ".shape", "expected [nx, ny] positive integers");
    g.nx = static_cast<std::size_t>(shape[0]);
    g.ny = static_cast<std::size_t>(shape[1]);
    g.u = numbers(require(l, "u", where), where + ".u");
    g.v = numbers(require(l, "v", where), where + ".v");
    try {
      return PlanarLayer(std::move(g));
    } catch (const InvalidInput& e) {
      throw LoadError(where, e.what());
    }
  }
  const std::string kind = text(l.at("kind"), where + ".kind");
  AnalyticLayer layer;
  if (kind == "superposition") {
    const Json& parts = require(l, "components", where);
    if (!parts.is_array() || parts.empty()) throw LoadError(where + ".components", "expected a non-empty array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string w = where + ".components[" + std::to_string(i) + "]";
      layer.components.push_back(parse_component(parts[i], text(require(parts[i], "kind", w), w + ".kind"), w));
    }
  } else {
    layer.components.push_back(parse_component(l, kind, where));
  }
  return PlanarLayer(std::move(layer));
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw LoadError(path.string(), e.what());
  }
}

FlowField2p5 parse_field(const Json& doc) {
  const Json& layers = require(doc, "layers", "field");
  if (!layers.is_array() || layers.empty()) throw LoadError("field.layers", "expected a non-empty array");
  std::vector<DepthLayer> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layers[" + std::to_string(i) + "]";
    const double z = number_at(layers[i], "depth", where);
    if (!out.empty() && !(z < out.back().z)) throw LoadError(where, "depths must be strictly decreasing");
    out.push_back({z, std::make_shared<const PlanarLayer>(parse_layer(layers[i], where))});
  }
  FlowField2p5 field(std::move(out));
  validate_field(field, number_or(doc, "divergence_tolerance", 1e-3, "field"));
  return field;
}

FlowField2p5 load_field(const std::filesystem::path& path) {
  try {
    return parse_field(read_json(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string(), e.what());
  }
}

std::optional<Box> field_extent(const Json& doc) {
  if (doc.contains("extent")) {
    const auto e = numbers(doc.at("extent"), "extent");
    if (e.size() != 4 || !(e[0] < e[2]) || !(e[1] < e[3])) throw LoadError("extent", "expected [x0, y0, x1, y1]");
    return Box{{e[0], e[1], 0.0}, {e[2], e[3], 0.0}};
  }
  std::optional<Box> box;
  const auto field = parse_field(doc);
  for (const auto& l : field.layers()) {
    const auto* g = l.layer->grid();
    if (g == nullptr) continue;
    const Box b{{g->origin.x, g->origin.y, 0.0},
                {g->origin.x + g->spacing.x * static_cast<double>(g->nx - 1),
                 g->origin.y + g->spacing.y * static_cast<double>(g->ny - 1), 0.0}};
    if (!box) {
      box = b;
    } else {
      box->lo = {std::min(box->lo.x, b.lo.x), std::min(box->lo.y, b.lo.y), 0.0};
      box->hi = {std::max(box->hi.x, b.hi.x), std::max(box->hi.y, b.hi.y), 0.0};
    }
  }
  return box;
}

GliderModel parse_model(const Json& doc) {
  const std::string where = "model";
  const double gmin = number_at(doc, "gamma_min_deg", where) * kDeg;
  const double gmax = number_at(doc, "gamma_max_deg", where) * kDeg;
  const double ballast = number_or(doc, "ballast_max_kg", 1.0, where);
  SpeedLaw law;
  if (doc.contains("table")) {
    SpeedTable table;
    const Json& rows = doc.at("table");
    if (!rows.is_array() || rows.empty()) throw LoadError("model.table", "expected [[gamma_deg, speed_mps], ...]");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto row = numbers(rows[i], "model.table[" + std::to_string(i) + "]");
      if (row.size() != 2) throw LoadError("model.table[" + std::to_string(i) + "]", "expected [gamma_deg, speed_mps]");
      table.samples.emplace_back(row[0] * kDeg, row[1]);
    }
    law = std::move(table);
  } else if (doc.contains("hydro")) {
    const Json& h = doc.at("hydro");
    const std::string w = "model.hydro";
    law = HydrodynamicLaw{number_at(h, "m0_buoyant_kg", w), number_at(h, "m0_heavy_kg", w),
                          number_or(h, "g", 9.81, w), numbers(require(h, "lift_poly", w), w + ".lift_poly"),
                          numbers(require(h, "drag_poly", w), w + ".drag_poly")};
  } else {
    throw LoadError(where, "expected either 'table' or 'hydro'");
  }
  try {
    return GliderModel(gmin, gmax, ballast, std::move(law));
  } catch (const ModelConfigError& e) {
    throw LoadError(where, e.what());
  }
}

GliderModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(read_json(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string(), e.what());
  }
}

LoadedScenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  const std::string where = "scenario";
  LoadedScenario out;
  Scenario& s = out.scenario;

  const Json& bounds = require(doc, "bounds", where);
  if (bounds.is_array()) {
    if (bounds.size() != 2) throw LoadError("scenario.bounds", "expected [[x0, y0, z0], [x1, y1, z1]]");
    s.bounds = {position(bounds[0], "scenario.bounds[0]"), position(bounds[1], "scenario.bounds[1]")};
  } else {
    s.bounds = {position(require(bounds, "min", "scenario.bounds"), "scenario.bounds.min"),
                position(require(bounds, "max", "scenario.bounds"), "scenario.bounds.max")};
  }
  s.start = position(require(doc, "start", where), "scenario.start");
  s.goal = position(require(doc, "goal", where), "scenario.goal");
  s.n_positions = count_at(doc, "n_positions", where);
  s.n_controls = count_or(doc, "n_controls", s.n_controls, where);
  s.k_neighbors = count_or(doc, "k_neighbors", s.k_neighbors, where);

  if (doc.contains("sampling")) {
    const Json& smp = doc.at("sampling");
    const std::string mode = text(require(smp, "mode", "scenario.sampling"), "scenario.sampling.mode");
    if (mode == "lattice")
      s.sampling = SamplingMode::lattice;
    else if (mode == "uniform-random" || mode == "random")
      s.sampling = SamplingMode::random;
    else
      throw LoadError("scenario.sampling.mode", "expected 'lattice' or 'uniform-random'");
    s.position_seed = count_or(smp, "seed", 0, "scenario.sampling");
  }
  if (doc.contains("steering")) {
    const Json& st = doc.at("steering");
    s.dt = number_or(st, "dt_s", s.dt, "scenario.steering");
    s.steps = count_or(st, "steps", s.steps, "scenario.steering");
    s.tol = number_or(st, "tol_m", s.tol, "scenario.steering");
  }
  if (doc.contains("controls")) {
    const Json& c = doc.at("controls");
    const std::string mode = text(require(c, "mode", "scenario.controls"), "scenario.controls.mode");
    if (mode == "grid")
      s.control_sampling = ControlSampling::grid;
    else if (mode == "random")
      s.control_sampling = ControlSampling::random;
    else
      throw LoadError("scenario.controls.mode", "expected 'grid' or 'random'");
    s.control_seed = count_or(c, "seed", 0, "scenario.controls");
  }
  if (doc.contains("method")) {
    try {
      s.method = parse_method(text(doc.at("method"), "scenario.method"));
    } catch (const InvalidInput& e) {
      throw LoadError("scenario.method", e.what());
    }
  }
  try {
    s.validate();
  } catch (const InvalidInput& e) {
    throw LoadError(where, e.what());
  }

  const Json& field = require(doc, "field", where);
  if (field.is_string())
    out.field = std::make_shared<const FlowField2p5>(load_field(base_dir / field.get<std::string>()));
  else
    out.field = std::make_shared<const FlowField2p5>(parse_field(field));

  if (!doc.contains("model"))
    out.model = std::make_shared<const GliderModel>(GliderModel::default_model());
  else if (doc.at("model").is_string())
    out.model = std::make_shared<const GliderModel>(load_model(base_dir / doc.at("model").get<std::string>()));
  else
    out.model = std::make_shared<const GliderModel>(parse_model(doc.at("model")));
  return out;
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_json(path), path.parent_path());
  } catch (const LoadError& e) {
    throw LoadError(path.string(), e.what());
  }
}

Json to_json(const TrimState& trim) {
  return {{"speed_mps", trim.speed},
          {"glide_angle_deg", trim.glide_angle / kDeg},
          {"heading_deg", trim.heading / kDeg},
          {"ballast_kg", trim.ballast}};
}

Json to_json(const ControlVector& c) { return Json::array({c.u, c.v, c.w}); }

Json to_json(const Position3& p) { return Json::array({p.x, p.y, p.z}); }

Json to_json(const Trajectory& t) {
  Json samples = Json::array();
  for (const auto& s : t.samples) samples.push_back(Json::array({s.t, s.p.x, s.p.y, s.p.z}));
  return {{"control", to_json(t.control)},
          {"reached", t.reached},
          {"exited_bounds", t.exited_bounds},
          {"samples", std::move(samples)}};
}

Json to_json(const SteerResult& r) {
  return {{"trim", to_json(r.trim)},
          {"control", to_json(r.control)},
          {"travel_time_s", r.travel_time},
          {"entry_time_s", r.entry_time},
          {"miss_distance_m", r.miss_distance},
          {"trajectory", to_json(r.trajectory)}};
}

Json plan_to_json(const Plan& plan) {
  Json positions = Json::array();
  for (const auto& p : plan.positions) positions.push_back(to_json(p));
  Json legs = Json::array();
  for (const auto& leg : plan.legs)
    legs.push_back({{"from", leg.from},
                    {"to", leg.to},
                    {"travel_time_s", leg.travel_time},
                    {"miss_distance_m", leg.miss_distance},
                    {"trim", to_json(leg.trim)},
                    {"control", to_json(leg.control)}});
  return {{"solved", true},
          {"total_travel_time_s", plan.total_time},
          {"node_path", plan.node_path},
          {"positions", std::move(positions)},
          {"legs", std::move(legs)}};
}

Json trajectories_to_json(const Plan& plan) {
  Json legs = Json::array();
  double offset = 0.0;
  for (std::size_t i = 0; i < plan.trajectories.size(); ++i) {
    Json leg = to_json(plan.trajectories[i]);
    leg["start_time_s"] = offset;
    leg["travel_time_s"] = plan.legs[i].travel_time;
    legs.push_back(std::move(leg));
    offset += plan.legs[i].travel_time;
  }
  return {{"legs", std::move(legs)}};
}

}  // namespace glider
