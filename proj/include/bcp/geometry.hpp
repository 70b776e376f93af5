#pragma once

#include <cmath>

namespace bcp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Distances below this are treated as collisions/degenerate geometry [m].
inline constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Counterclockwise rotation of v by angle.
inline Vec2 rotate(double angle, Vec2 v) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Left normal: rotation by +pi/2.
inline Vec2 left_normal(Vec2 v) { return {-v.y, v.x}; }

// Unit vector at world angle h.
inline Vec2 unit_vec(double h) { return {std::cos(h), std::sin(h)}; }

// World angle of v in [-pi, pi).
inline double vec_angle(Vec2 v) { return std::atan2(v.y, v.x); }

// Wrap to [-pi, pi).
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // in [-pi, pi]
  return r >= kPi ? r - kTwoPi : r;
}

// Wrap to [0, 2*pi).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

// Distance between angles on the circle, in [0, pi].
inline double angle_dist(double a, double b) {
  return std::fabs(wrap_angle(a - b));
}

}  // namespace bcp
