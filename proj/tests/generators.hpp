#pragma once

// Hand-rolled generators for property tests: splitmix64 plus a few shapes
// built on it. Every property test fixes its seed so failures replay.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "glider/dynamics.hpp"
#include "glider/geometry.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool coin() { return (next() & 1U) != 0; }

 private:
  std::uint64_t state_;
};

inline glider::Vec2 point2(Rng& r, double half = 500.0) { return {r.uniform(-half, half), r.uniform(-half, half)}; }

inline glider::Position3 point3(Rng& r, double half = 500.0, double bottom = -300.0, double top = 0.0) {
  return {r.uniform(-half, half), r.uniform(-half, half), r.uniform(bottom, top)};
}

/// A glide angle inside the model's valid set, either sign.
inline double gamma(Rng& r, const glider::GliderModel& m) {
  const double g = r.uniform(m.gamma_min(), m.gamma_max());
  return r.coin() ? g : -g;
}

inline double heading(Rng& r) { return r.uniform(0.0, 2.0 * std::numbers::pi); }

/// A pair at different depths whose horizontal offset is at least `min_h`.
inline std::pair<glider::Position3, glider::Position3> pair(Rng& r, double min_h = 20.0, double max_h = 300.0) {
  const glider::Position3 a = point3(r, 400.0, -280.0, -20.0);
  const double len = r.uniform(min_h, max_h);
  const double dir = heading(r);
  double dz = r.uniform(20.0, 150.0);
  if (r.coin()) dz = -dz;
  glider::Position3 b{a.x + len * std::cos(dir), a.y + len * std::sin(dir), a.z + dz};
  return {a, b};
}

}  // namespace gen
