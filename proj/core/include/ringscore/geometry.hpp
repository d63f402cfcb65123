#pragma once

#include <cmath>
#include <compare>

namespace ringscore {

/// Continuous image-plane point. Pixel (x, y) covers [x, x+1) x [y, y+1),
/// so its center sits at (x + 0.5, y + 0.5). Origin top-left, y down.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Integer pixel coordinate.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(Pixel, Pixel) = default;
  /// Raster order: row first, then column.
  friend std::strong_ordering operator<=>(Pixel a, Pixel b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

inline Vec2 pixel_center(Pixel p) { return {p.x + 0.5, p.y + 0.5}; }

}  // namespace ringscore
