#pragma once

#include <cmath>

namespace glider {

/// Horizontal point or vector (metres, or metres/second for velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// A point in the workspace. z is positive up, so underwater points have
/// z <= 0 and depth is -z.
struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec2 horizontal() const { return {x, y}; }

  friend constexpr Position3 operator+(Position3 a, Position3 b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Position3 operator-(Position3 a, Position3 b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Position3 operator*(double s, Position3 a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend constexpr bool operator==(Position3, Position3) = default;
};

inline double norm(Position3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
inline double distance(Position3 a, Position3 b) { return norm(a - b); }
inline bool is_finite(Position3 p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}
inline bool is_finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Horizontal current. The vertical component is zero by construction.
struct FlowVector {
  double u = 0.0;
  double v = 0.0;

  friend constexpr FlowVector operator+(FlowVector a, FlowVector b) { return {a.u + b.u, a.v + b.v}; }
  friend constexpr FlowVector operator*(double s, FlowVector a) { return {s * a.u, s * a.v}; }
  friend constexpr bool operator==(FlowVector, FlowVector) = default;
};

inline double speed(FlowVector f) { return std::hypot(f.u, f.v); }

/// Axis-aligned workspace box.
struct Box {
  Position3 lo;
  Position3 hi;

  bool contains(Position3 p, double slack = 0.0) const {
    return p.x >= lo.x - slack && p.x <= hi.x + slack && p.y >= lo.y - slack &&
           p.y <= hi.y + slack && p.z >= lo.z - slack && p.z <= hi.z + slack;
  }
  Position3 extent() const { return hi - lo; }
};

}  // namespace glider
