#pragma once

#include <array>
#include <span>

#include "ringscore/geometry.hpp"
#include "ringscore/raster.hpp"

namespace ringscore {

/// Geometric ellipse. semi_major >= semi_minor > 0, theta in [0, pi) is the
/// angle of the major axis measured from +x toward +y (screen clockwise).
struct Ellipse {
  Vec2 center;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double theta = 0.0;

  double area() const noexcept;
  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

/// Builds a valid ellipse from any two positive semi-axes and an angle:
/// swaps axes if needed and wraps theta into [0, pi).
Ellipse make_ellipse(Vec2 center, double axis_1, double axis_2, double theta);

/// General conic A x^2 + B xy + C y^2 + D x + E y + F = 0.
struct Conic {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0;
};

Conic to_conic(const Ellipse& e);
/// Throws Degenerate unless the conic is a real ellipse.
Ellipse from_conic(const Conic& q);

/// Direct least-squares fit with the ellipse-specific constraint
/// 4AC - B^2 = 1. Input is centered and scaled to unit RMS radius before the
/// constrained eigenproblem is solved.
/// Throws TooFewPoints (< 5 points) or Degenerate (collinear / rank deficient).
Ellipse fit_ellipse(std::span<const Vec2> points);

/// Normalized quadratic form; <= 1 inside (boundary inclusive).
double ellipse_level(const Ellipse& e, Vec2 p) noexcept;
bool point_in_ellipse(const Ellipse& e, Vec2 p) noexcept;

/// Distance from p to the boundary measured along the ray from the center.
double radial_distance(const Ellipse& e, Vec2 p) noexcept;

/// Pixel (x, y) is set iff its center (x + 0.5, y + 0.5) lies in e.
BitMask ellipse_mask(const Ellipse& e, int width, int height);

/// Grows the full width and height by `d` pixels (each semi-axis by d / 2).
Ellipse expand(const Ellipse& e, double d);

struct AxisEndpoints {
  std::array<Vec2, 2> major;
  std::array<Vec2, 2> minor;
};

AxisEndpoints axis_endpoints(const Ellipse& e) noexcept;

}  // namespace ringscore
