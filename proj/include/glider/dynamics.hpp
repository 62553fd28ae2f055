#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace glider {

/// Steady-glide speed from the force balance
///   V = sqrt(m0 g / (-D(gamma) sin(gamma) + L(gamma) cos(gamma)))
/// with lift and drag given as polynomials in gamma (radians, ascending
/// powers). m0 is the net buoyant mass term for the ballast state in use.
struct HydrodynamicLaw {
  double m0_buoyant_kg = 0.0;
  double m0_heavy_kg = 0.0;
  double gravity = 9.81;
  std::vector<double> lift_poly;
  std::vector<double> drag_poly;
};

/// Speed as a function of |gamma|, piecewise linear between samples.
struct SpeedTable {
  std::vector<std::pair<double, double>> samples;  // (|gamma| rad, speed m/s)
};

using SpeedLaw = std::variant<HydrodynamicLaw, SpeedTable>;

struct ControlVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

struct TrimState {
  double speed = 0.0;        // V_G, m/s
  double glide_angle = 0.0;  // gamma, rad; positive climbs
  double heading = 0.0;      // delta, rad
  double ballast = 0.0;      // m_b, kg
};

/// Trim-state glider kinematics. Valid glide angles are
/// [gamma_min, gamma_max] U [-gamma_max, -gamma_min]; climbing uses the empty
/// (buoyant) ballast state, diving the full one.
class GliderModel {
 public:
  GliderModel(double gamma_min, double gamma_max, double ballast_max, SpeedLaw law);

  /// The bundled model: 15..45 degree glide angles and a hydrodynamic law
  /// with a maximum horizontal speed of about 0.9 m/s.
  static GliderModel default_model();
  /// Constant-speed table model.
  static GliderModel constant_speed(double speed, double gamma_min, double gamma_max);

  double gamma_min() const { return gamma_min_; }
  double gamma_max() const { return gamma_max_; }
  double ballast_max() const { return ballast_max_; }
  const SpeedLaw& law() const { return law_; }

  bool in_domain(double gamma) const;
  /// Ballast state that realises a glide in the direction of gamma.
  double ballast_for(double gamma) const { return gamma > 0.0 ? 0.0 : ballast_max_; }

  /// Throws DomainError for gamma outside the valid set or a ballast state
  /// that does not match the glide direction.
  double glider_speed(double gamma, double ballast) const;
  double glider_speed(double gamma) const { return glider_speed(gamma, ballast_for(gamma)); }

  /// V_G(gamma) cos(gamma).
  double horizontal_speed(double gamma) const;

  ControlVector control_vector(double gamma, double heading) const;
  TrimState trim(double gamma, double heading) const;

  /// max over valid gamma of V_G(gamma) cos(gamma), and the (positive) angle
  /// that attains it on the climbing branch.
  double max_horizontal_speed() const { return max_horizontal_speed_; }
  double max_horizontal_angle() const { return max_horizontal_angle_; }
  /// max over valid gamma of V_G(gamma).
  double max_speed() const { return max_speed_; }

 private:
  double speed_unchecked(double gamma) const;

  double gamma_min_;
  double gamma_max_;
  double ballast_max_;
  SpeedLaw law_;
  double max_horizontal_speed_ = 0.0;
  double max_horizontal_angle_ = 0.0;
  double max_speed_ = 0.0;
};

struct SpeedOptimum {
  double speed = 0.0;  // V*, m/s
  double gamma = 0.0;  // gamma*, rad (climbing branch)
};

inline SpeedOptimum max_horizontal_speed(const GliderModel& model) {
  return {model.max_horizontal_speed(), model.max_horizontal_angle()};
}

struct SurfaceSample {
  double gamma = 0.0;
  double heading = 0.0;
  ControlVector control;
};

/// n controls on a deterministic (gamma rows x heading columns) grid over both
/// glide branches. Row count follows the ratio of parameter extents; the n
/// samples are dealt across rows as evenly as possible. n = 1 gives
/// (gamma_min, 0).
std::vector<SurfaceSample> sample_control_surface(const GliderModel& model, std::size_t n);

/// n seeded uniform draws of (gamma, heading) over the control surface.
std::vector<SurfaceSample> random_control_surface(const GliderModel& model, std::size_t n, std::uint64_t seed);

double evaluate_polynomial(const std::vector<double>& ascending, double x);

}  // namespace glider
