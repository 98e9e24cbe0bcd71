#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarmetrics::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }
  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  static Rect centered(Vec2 c, double w, double h) {
    return {c.x - w / 2, c.y - h / 2, c.x + w / 2, c.y + h / 2};
  }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
  Vec2 clamp(Vec2 p) const { return {std::clamp(p.x, x0, x1), std::clamp(p.y, y0, y1)}; }
  Rect intersect(const Rect& r) const {
    return {std::max(x0, r.x0), std::max(y0, r.y0), std::min(x1, r.x1), std::min(y1, r.y1)};
  }
  bool operator==(const Rect&) const = default;
};

}  // namespace swarmetrics::sim
