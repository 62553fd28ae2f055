#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "generators.hpp"
#include "glider/dynamics.hpp"
#include "glider/error.hpp"

using namespace glider;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("constant table speed") {
  const auto m = GliderModel::constant_speed(1.0, 15 * kDeg, 45 * kDeg);
  gen::Rng rng(10);
  for (int i = 0; i < 100; ++i) CHECK(m.glider_speed(gen::gamma(rng, m)) == 1.0);
  const auto [v_star, g_star] = max_horizontal_speed(m);
  CHECK(g_star == doctest::Approx(15 * kDeg).epsilon(1e-9));
  CHECK(v_star == doctest::Approx(std::cos(15 * kDeg)).epsilon(1e-12));
}

TEST_CASE("default model horizontal speed is about 0.9 m/s") {
  const auto m = GliderModel::default_model();
  const auto best = max_horizontal_speed(m);
  CHECK(std::abs(best.speed - 0.9) <= 0.05);
  CHECK(m.gamma_min() == doctest::Approx(15 * kDeg));
  CHECK(m.gamma_max() == doctest::Approx(45 * kDeg));
  // Symmetric climb and dive.
  gen::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const double g = rng.uniform(m.gamma_min(), m.gamma_max());
    CHECK(m.glider_speed(g) == doctest::Approx(m.glider_speed(-g)).epsilon(1e-14));
  }
}

TEST_CASE("hydrodynamic law by direct substitution") {
  // Lift L(gamma) = -c gamma, no drag: denominator = -c gamma cos(gamma).
  // At gamma0 = -30 deg pick c so the denominator is 8, and m0 g = 2, giving
  // V = sqrt(2 / 8) = 0.5.
  const double g0 = -30 * kDeg;
  const double c = 8.0 / (-g0 * std::cos(g0));
  const double gravity = 9.81;
  HydrodynamicLaw law{-2.0 / gravity, 2.0 / gravity, gravity, {0.0, -c}, {0.0}};
  const GliderModel m(15 * kDeg, 45 * kDeg, 1.0, law);
  CHECK(m.glider_speed(g0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.glider_speed(-g0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("model construction rejects bad configurations") {
  // Positive constant lift with a negative buoyant mass: negative radicand on
  // the climbing branch.
  CHECK_THROWS_AS(GliderModel(15 * kDeg, 45 * kDeg, 1.0, HydrodynamicLaw{-0.3, 0.3, 9.81, {5.0}, {1.0}}),
                  ModelConfigError);
  CHECK_THROWS_AS(GliderModel(0.0, 45 * kDeg, 1.0, SpeedTable{{{0.3, 1.0}}}), ModelConfigError);
  CHECK_THROWS_AS(GliderModel(50 * kDeg, 45 * kDeg, 1.0, SpeedTable{{{0.3, 1.0}}}), ModelConfigError);
  CHECK_THROWS_AS(GliderModel(15 * kDeg, 95 * kDeg, 1.0, SpeedTable{{{0.3, 1.0}}}), ModelConfigError);
  CHECK_THROWS_AS(GliderModel(15 * kDeg, 45 * kDeg, 0.0, SpeedTable{{{0.3, 1.0}}}), ModelConfigError);
  CHECK_THROWS_AS(GliderModel(15 * kDeg, 45 * kDeg, 1.0, SpeedTable{{{0.3, -1.0}}}), ModelConfigError);
  CHECK_THROWS_AS(GliderModel(15 * kDeg, 45 * kDeg, 1.0, SpeedTable{}), ModelConfigError);
}

TEST_CASE("glider_speed domain errors") {
  const auto m = GliderModel::default_model();
  CHECK_THROWS_AS(m.glider_speed(0.0), DomainError);
  CHECK_THROWS_AS(m.glider_speed(10 * kDeg), DomainError);
  CHECK_THROWS_AS(m.glider_speed(-50 * kDeg), DomainError);
  // Ballast must match the glide direction.
  CHECK_THROWS_AS(m.glider_speed(20 * kDeg, m.ballast_max()), DomainError);
  CHECK_THROWS_AS(m.glider_speed(-20 * kDeg, 0.0), DomainError);
  CHECK(m.glider_speed(20 * kDeg, 0.0) > 0.0);
  CHECK(m.glider_speed(-20 * kDeg, m.ballast_max()) > 0.0);
}

TEST_CASE("control_vector examples and identities") {
  const auto one = GliderModel::constant_speed(1.0, 15 * kDeg, 45 * kDeg);
  const double g = 30 * kDeg;
  const ControlVector c = one.control_vector(g, 0.0);
  CHECK(c.u == doctest::Approx(std::cos(g)));
  CHECK(c.v == 0.0);
  CHECK(c.w == doctest::Approx(std::sin(g)));
  const ControlVector north = one.control_vector(g, std::numbers::pi / 2);
  CHECK(std::abs(north.u) < 1e-15);
  CHECK(north.v == doctest::Approx(std::cos(g)));

  const auto m = GliderModel::default_model();
  gen::Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const double gamma = gen::gamma(rng, m);
    const double delta = gen::heading(rng);
    const ControlVector cv = m.control_vector(gamma, delta);
    const double v = m.glider_speed(gamma);
    CHECK(rel_err(cv.u * cv.u + cv.v * cv.v + cv.w * cv.w, v * v) <= 1e-12);
    CHECK(std::hypot(cv.u, cv.v) <= m.max_horizontal_speed() * (1 + 1e-12));
    CHECK(std::hypot(cv.u, cv.v) == doctest::Approx(v * std::cos(gamma)).epsilon(1e-12));
    // Heading + pi negates the horizontal part only.
    const ControlVector back = m.control_vector(gamma, delta + std::numbers::pi);
    CHECK(back.u == doctest::Approx(-cv.u).epsilon(1e-12).scale(1e-6));
    CHECK(back.v == doctest::Approx(-cv.v).epsilon(1e-12).scale(1e-6));
    CHECK(back.w == cv.w);
    // Ballast follows the glide direction.
    const TrimState t = m.trim(gamma, delta);
    CHECK(t.ballast == (cv.w > 0.0 ? 0.0 : m.ballast_max()));
    CHECK(t.speed == v);
  }
}

TEST_CASE("max horizontal speed dominates random probes") {
  const GliderModel models[] = {
      GliderModel::default_model(),
      GliderModel(10 * kDeg, 60 * kDeg, 1.0, SpeedTable{{{10 * kDeg, 0.4}, {30 * kDeg, 1.2}, {60 * kDeg, 1.5}}}),
      GliderModel::constant_speed(0.7, 20 * kDeg, 40 * kDeg)};
  gen::Rng rng(13);
  for (const auto& m : models) {
    const auto best = max_horizontal_speed(m);
    CHECK(m.horizontal_speed(best.gamma) == doctest::Approx(best.speed).epsilon(1e-12));
    for (int i = 0; i < 1000; ++i) {
      const double g = gen::gamma(rng, m);
      CHECK(best.speed >= m.glider_speed(g) * std::cos(g) * (1 - 1e-12));
    }
  }
}

TEST_CASE("sample_control_surface") {
  const auto m = GliderModel::default_model();
  const auto one = sample_control_surface(m, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].gamma == m.gamma_min());
  CHECK(one[0].heading == 0.0);

  const auto s16 = sample_control_surface(m, 16);
  REQUIRE(s16.size() == 16);
  std::set<std::pair<double, double>> distinct;
  for (const auto& s : s16) {
    distinct.insert({s.gamma, s.heading});
    const double v = m.glider_speed(s.gamma);
    const auto& c = s.control;
    CHECK(rel_err(c.u * c.u + c.v * c.v + c.w * c.w, v * v) <= 1e-12);
  }
  CHECK(distinct.size() == 16);

  gen::Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng.index(500);
    const auto s = sample_control_surface(m, n);
    CHECK(s.size() == n);
    bool climb = false, dive = false;
    for (const auto& x : s) {
      CHECK(m.in_domain(x.gamma));
      CHECK(x.heading >= 0.0);
      CHECK(x.heading < 2 * std::numbers::pi);
      climb |= x.gamma > 0.0;
      dive |= x.gamma < 0.0;
    }
    if (n >= 4) CHECK((climb && dive));
    // Deterministic.
    const auto again = sample_control_surface(m, n);
    for (std::size_t k = 0; k < n; ++k) CHECK(again[k].gamma == s[k].gamma);
  }
}

TEST_CASE("random_control_surface is seeded") {
  const auto m = GliderModel::default_model();
  const auto a = random_control_surface(m, 50, 7);
  const auto b = random_control_surface(m, 50, 7);
  const auto c = random_control_surface(m, 50, 8);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].gamma == b[i].gamma);
    CHECK(a[i].heading == b[i].heading);
    CHECK(m.in_domain(a[i].gamma));
    differs |= a[i].gamma != c[i].gamma;
  }
  CHECK(differs);
}

TEST_CASE("polynomial evaluation") {
  CHECK(evaluate_polynomial({2.0, 0.0, 8.0}, 0.5) == doctest::Approx(4.0));
  CHECK(evaluate_polynomial({1.0}, 123.0) == 1.0);
  CHECK(evaluate_polynomial({0.0, -14.0}, -0.25) == doctest::Approx(3.5));
}
