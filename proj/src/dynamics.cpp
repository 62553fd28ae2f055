#include "glider/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "glider/error.hpp"

namespace glider {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr std::size_t kScanPoints = 2001;

double deg(double radians) { return radians * 180.0 / std::numbers::pi; }

// Golden-section refinement of a unimodal maximum inside [lo, hi].
template <class F>
std::pair<double, double> refine_max(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 100 && b - a > 1e-14; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

// Dense scan of both branches plus local refinement. Returns (argmax, max);
// ties resolve to the first scanned point, climbing branch first.
template <class F>
std::pair<double, double> maximise_over_domain(F&& f, double gamma_min, double gamma_max) {
  double best_x = gamma_min;
  double best_f = -1.0;
  for (const double sign : {1.0, -1.0}) {
    std::size_t best_i = 0;
    double local_best = -1.0;
    const double step = (gamma_max - gamma_min) / static_cast<double>(kScanPoints - 1);
    for (std::size_t i = 0; i < kScanPoints; ++i) {
      const double val = f(sign * (gamma_min + static_cast<double>(i) * step));
      if (val > local_best) {
        local_best = val;
        best_i = i;
      }
    }
    double x = sign * (gamma_min + static_cast<double>(best_i) * step);
    double fx = local_best;
    if (best_i > 0 && best_i + 1 < kScanPoints) {
      const double lo = gamma_min + static_cast<double>(best_i - 1) * step;
      const double hi = gamma_min + static_cast<double>(best_i + 1) * step;
      const auto [rx, rf] = refine_max([&](double g) { return f(sign * g); }, lo, hi);
      if (rf > fx) {
        x = sign * rx;
        fx = rf;
      }
    }
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return {best_x, best_f};
}

}  // namespace

double evaluate_polynomial(const std::vector<double>& ascending, double x) {
  double acc = 0.0;
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
  return acc;
}

GliderModel::GliderModel(double gamma_min, double gamma_max, double ballast_max, SpeedLaw law)
    : gamma_min_(gamma_min), gamma_max_(gamma_max), ballast_max_(ballast_max), law_(std::move(law)) {
  if (!(gamma_min_ > 0.0 && gamma_min_ < gamma_max_ && gamma_max_ < std::numbers::pi / 2))
    throw ModelConfigError("glide-angle bounds must satisfy 0 < gamma_min < gamma_max < 90 deg");
  if (!(ballast_max_ > 0.0) || !std::isfinite(ballast_max_)) throw ModelConfigError("ballast_max must be positive");

  if (auto* table = std::get_if<SpeedTable>(&law_)) {
    auto& s = table->samples;
    if (s.empty()) throw ModelConfigError("speed table is empty");
    for (auto& [g, v] : s) {
      g = std::abs(g);
      if (!std::isfinite(g) || !std::isfinite(v) || !(v > 0.0))
        throw ModelConfigError("speed table entries must be finite with positive speed");
    }
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i].first == s[i - 1].first) throw ModelConfigError("speed table has duplicate glide angles");
  } else {
    const auto& h = std::get<HydrodynamicLaw>(law_);
    if (h.lift_poly.empty() || h.drag_poly.empty()) throw ModelConfigError("lift and drag polynomials are required");
    if (!(h.gravity > 0.0)) throw ModelConfigError("gravity must be positive");
  }

  // Every angle on a dense grid over both branches must give a positive finite
  // speed; for the hydrodynamic law this is the sign agreement between m0 g
  // and the force-balance denominator.
  for (const double sign : {1.0, -1.0}) {
    for (std::size_t i = 0; i < kScanPoints; ++i) {
      const double g = sign * (gamma_min_ + (gamma_max_ - gamma_min_) * static_cast<double>(i) / (kScanPoints - 1));
      const double v = speed_unchecked(g);
      if (!std::isfinite(v) || !(v > 0.0))
        throw ModelConfigError("speed law is not positive and finite at gamma = " + std::to_string(deg(g)) + " deg");
    }
  }

  const auto [arg_h, max_h] =
      maximise_over_domain([this](double g) { return speed_unchecked(g) * std::cos(g); }, gamma_min_, gamma_max_);
  max_horizontal_angle_ = arg_h;
  max_horizontal_speed_ = max_h;
  max_speed_ = maximise_over_domain([this](double g) { return speed_unchecked(g); }, gamma_min_, gamma_max_).second;
}

GliderModel GliderModel::default_model() {
  constexpr double m0 = 0.372;
  HydrodynamicLaw law{-m0, m0, 9.81, {0.0, -14.0}, {2.0, 0.0, 8.0}};
  return GliderModel(15.0 * std::numbers::pi / 180.0, 45.0 * std::numbers::pi / 180.0, 1.0, std::move(law));
}

GliderModel GliderModel::constant_speed(double speed, double gamma_min, double gamma_max) {
  return GliderModel(gamma_min, gamma_max, 1.0, SpeedTable{{{gamma_min, speed}, {gamma_max, speed}}});
}

bool GliderModel::in_domain(double gamma) const {
  const double a = std::abs(gamma);
  return std::isfinite(gamma) && a >= gamma_min_ - kDomainSlack && a <= gamma_max_ + kDomainSlack;
}

double GliderModel::speed_unchecked(double gamma) const {
  if (const auto* table = std::get_if<SpeedTable>(&law_)) {
    const auto& s = table->samples;
    const double a = std::abs(gamma);
    if (a <= s.front().first) return s.front().second;
    if (a >= s.back().first) return s.back().second;
    const auto hi = std::lower_bound(s.begin(), s.end(), a, [](const auto& e, double x) { return e.first < x; });
    const auto lo = hi - 1;
    const double t = (a - lo->first) / (hi->first - lo->first);
    return (1.0 - t) * lo->second + t * hi->second;
  }
  const auto& h = std::get<HydrodynamicLaw>(law_);
  const double m0 = gamma > 0.0 ? h.m0_buoyant_kg : h.m0_heavy_kg;
  const double lift = evaluate_polynomial(h.lift_poly, gamma);
  const double drag = evaluate_polynomial(h.drag_poly, gamma);
  const double denominator = -drag * std::sin(gamma) + lift * std::cos(gamma);
  return std::sqrt(m0 * h.gravity / denominator);
}

double GliderModel::glider_speed(double gamma, double ballast) const {
  if (!in_domain(gamma))
    throw DomainError("glide angle " + std::to_string(deg(gamma)) + " deg is outside the valid set");
  if (ballast != ballast_for(gamma))
    throw DomainError("ballast state does not match the glide direction");
  return speed_unchecked(gamma);
}

double GliderModel::horizontal_speed(double gamma) const { return glider_speed(gamma) * std::cos(gamma); }

ControlVector GliderModel::control_vector(double gamma, double heading) const {
  const double v = glider_speed(gamma);
  const double h = v * std::cos(gamma);
  return {h * std::cos(heading), h * std::sin(heading), v * std::sin(gamma)};
}

TrimState GliderModel::trim(double gamma, double heading) const {
  return {glider_speed(gamma), gamma, heading, ballast_for(gamma)};
}

namespace {

double surface_gamma(const GliderModel& model, double t) {
  const double span = model.gamma_max() - model.gamma_min();
  return t < span ? model.gamma_min() + t : -(model.gamma_min() + (t - span));
}

}  // namespace

std::vector<SurfaceSample> sample_control_surface(const GliderModel& model, std::size_t n) {
  if (n == 0) throw InvalidInput("sample_control_surface: n must be >= 1");
  const double gamma_extent = 2.0 * (model.gamma_max() - model.gamma_min());
  const double heading_extent = 2.0 * std::numbers::pi;
  const auto rows = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n) * gamma_extent / heading_extent))),
      std::min<std::size_t>(n, 2), n);

  std::vector<SurfaceSample> out;
  out.reserve(n);
  for (std::size_t r = 0; r < rows; ++r) {
    const double gamma = surface_gamma(model, static_cast<double>(r) * gamma_extent / static_cast<double>(rows));
    const std::size_t cols = n / rows + (r < n % rows ? 1 : 0);
    for (std::size_t c = 0; c < cols; ++c) {
      const double heading = static_cast<double>(c) * heading_extent / static_cast<double>(cols);
      out.push_back({gamma, heading, model.control_vector(gamma, heading)});
    }
  }
  return out;
}

std::vector<SurfaceSample> random_control_surface(const GliderModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("random_control_surface: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_dist(0.0, 2.0 * (model.gamma_max() - model.gamma_min()));
  std::uniform_real_distribution<double> heading_dist(0.0, 2.0 * std::numbers::pi);
  std::vector<SurfaceSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = surface_gamma(model, t_dist(rng));
    const double heading = heading_dist(rng);
    out.push_back({gamma, heading, model.control_vector(gamma, heading)});
  }
  return out;
}

}  // namespace glider
