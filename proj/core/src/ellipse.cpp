#include "ringscore/ellipse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ringscore {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) noexcept {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

}  // namespace

double Ellipse::area() const noexcept { return kPi * semi_major * semi_minor; }

Ellipse make_ellipse(Vec2 center, double axis_1, double axis_2, double theta) {
  if (!(axis_1 > 0.0) || !(axis_2 > 0.0) || !std::isfinite(axis_1) || !std::isfinite(axis_2)) {
    throw Error(ErrorCode::BadParameter, "ellipse semi-axes must be positive and finite");
  }
  if (axis_2 > axis_1) {
    std::swap(axis_1, axis_2);
    theta += kPi / 2.0;
  }
  return {center, axis_1, axis_2, wrap_angle(theta)};
}

Conic to_conic(const Ellipse& e) {
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  const double ia = 1.0 / (e.semi_major * e.semi_major);
  const double ib = 1.0 / (e.semi_minor * e.semi_minor);
  Conic q;
  q.a = c * c * ia + s * s * ib;
  q.b = 2.0 * c * s * (ia - ib);
  q.c = s * s * ia + c * c * ib;
  const double x0 = e.center.x;
  const double y0 = e.center.y;
  q.d = -2.0 * q.a * x0 - q.b * y0;
  q.e = -q.b * x0 - 2.0 * q.c * y0;
  q.f = q.a * x0 * x0 + q.b * x0 * y0 + q.c * y0 * y0 - 1.0;
  return q;
}

Ellipse from_conic(const Conic& input) {
  Conic q = input;
  if (q.a + q.c < 0.0) {
    q = {-q.a, -q.b, -q.c, -q.d, -q.e, -q.f};
  }
  const double det = 4.0 * q.a * q.c - q.b * q.b;
  if (!(det > 0.0)) throw Error(ErrorCode::Degenerate, "conic is not an ellipse");
  const double x0 = (q.b * q.e - 2.0 * q.c * q.d) / det;
  const double y0 = (q.b * q.d - 2.0 * q.a * q.e) / det;
  const double f0 = q.a * x0 * x0 + q.b * x0 * y0 + q.c * y0 * y0 + q.d * x0 + q.e * y0 + q.f;
  const double mean = 0.5 * (q.a + q.c);
  const double spread = std::hypot(0.5 * (q.a - q.c), 0.5 * q.b);
  const double lambda_small = mean - spread;
  const double lambda_large = mean + spread;
  if (!(lambda_small > 0.0) || !(f0 < 0.0)) throw Error(ErrorCode::Degenerate, "conic has no real points");
  const double major = std::sqrt(-f0 / lambda_small);
  const double minor = std::sqrt(-f0 / lambda_large);
  // The large-eigenvalue eigenvector sits at 0.5 * atan2(B, A - C); the major axis is orthogonal.
  const double theta = 0.5 * std::atan2(q.b, q.a - q.c) + kPi / 2.0;
  if (!std::isfinite(major) || !std::isfinite(minor)) throw Error(ErrorCode::Degenerate, "non-finite axes");
  return make_ellipse({x0, y0}, major, minor, theta);
}

Ellipse fit_ellipse(std::span<const Vec2> points) {
  if (points.size() < 5) {
    throw Error(ErrorCode::TooFewPoints, "ellipse fit needs >= 5 points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  Vec2 mean{};
  for (const Vec2 p : points) mean = mean + p;
  mean = (1.0 / n) * mean;

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const Vec2 p : points) {
    const Eigen::Vector2d d(p.x - mean.x, p.y - mean.y);
    cov += d * d.transpose();
  }
  cov /= n;
  const double rms = std::sqrt(cov.trace());
  if (!(rms > 0.0)) throw Error(ErrorCode::Degenerate, "all points coincide");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> spread(cov);
  if (spread.eigenvalues()(0) <= 1e-12 * spread.eigenvalues()(1)) {
    throw Error(ErrorCode::Degenerate, "points are collinear");
  }

  // Quadratic / linear split of the design matrix (block-reduced scatter).
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
  for (const Vec2 p : points) {
    const double x = (p.x - mean.x) / rms;
    const double y = (p.y - mean.y) / rms;
    const Eigen::Vector3d quad(x * x, x * y, y * y);
    const Eigen::Vector3d lin(x, y, 1.0);
    s1 += quad * quad.transpose();
    s2 += quad * lin.transpose();
    s3 += lin * lin.transpose();
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> s3_lu(s3);
  if (!s3_lu.isInvertible()) throw Error(ErrorCode::Degenerate, "linear scatter is singular");
  const Eigen::Matrix3d t = -s3_lu.solve(s2.transpose());
  const Eigen::Matrix3d reduced = s1 + s2 * t;
  // Premultiply by the inverse of the 3x3 constraint block [[0,0,2],[0,-1,0],[2,0,0]].
  Eigen::Matrix3d m;
  m.row(0) = reduced.row(2) / 2.0;
  m.row(1) = -reduced.row(1);
  m.row(2) = reduced.row(0) / 2.0;

  const Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::Degenerate, "eigen solve failed");
  int best = -1;
  double best_lambda = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const auto lambda = solver.eigenvalues()(i);
    if (std::abs(lambda.imag()) > 1e-9 * (1.0 + std::abs(lambda.real()))) continue;
    const Eigen::Vector3d v = solver.eigenvectors().col(i).real();
    const double constraint = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (constraint > 0.0 && std::abs(lambda.real()) < best_lambda) {
      best = i;
      best_lambda = std::abs(lambda.real());
    }
  }
  if (best < 0) throw Error(ErrorCode::Degenerate, "no ellipse-constrained eigenvector");
  Eigen::Vector3d quad = solver.eigenvectors().col(best).real();
  quad /= std::sqrt(4.0 * quad(0) * quad(2) - quad(1) * quad(1));
  const Eigen::Vector3d lin = t * quad;

  const Ellipse unit = from_conic({quad(0), quad(1), quad(2), lin(0), lin(1), lin(2)});
  return make_ellipse({mean.x + rms * unit.center.x, mean.y + rms * unit.center.y}, rms * unit.semi_major,
                      rms * unit.semi_minor, unit.theta);
}

double ellipse_level(const Ellipse& e, Vec2 p) noexcept {
  const double dx = p.x - e.center.x;
  const double dy = p.y - e.center.y;
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  const double u = (dx * c + dy * s) / e.semi_major;
  const double v = (-dx * s + dy * c) / e.semi_minor;
  return u * u + v * v;
}

bool point_in_ellipse(const Ellipse& e, Vec2 p) noexcept { return ellipse_level(e, p) <= 1.0; }

double radial_distance(const Ellipse& e, Vec2 p) noexcept {
  const double r = distance(p, e.center);
  const double level = ellipse_level(e, p);
  if (r == 0.0 || level == 0.0) return e.semi_minor;
  return std::abs(r - r / std::sqrt(level));
}

BitMask ellipse_mask(const Ellipse& e, int width, int height) {
  BitMask mask(width, height);
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  const double half_w = std::hypot(e.semi_major * c, e.semi_minor * s);
  const double half_h = std::hypot(e.semi_major * s, e.semi_minor * c);
  const int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - half_w - 1.0)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(e.center.x + half_w + 1.0)));
  const int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - half_h - 1.0)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(e.center.y + half_h + 1.0)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (point_in_ellipse(e, {x + 0.5, y + 0.5})) mask(x, y) = 1;
    }
  }
  return mask;
}

Ellipse expand(const Ellipse& e, double d) {
  const double half = d / 2.0;
  if (!(e.semi_minor + half > 0.0)) {
    throw Error(ErrorCode::BadParameter, "expansion would make the ellipse non-positive");
  }
  return {e.center, e.semi_major + half, e.semi_minor + half, e.theta};
}

AxisEndpoints axis_endpoints(const Ellipse& e) noexcept {
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  const Vec2 major{e.semi_major * c, e.semi_major * s};
  const Vec2 minor{-e.semi_minor * s, e.semi_minor * c};
  return {{e.center + major, e.center - major}, {e.center + minor, e.center - minor}};
}

}  // namespace ringscore
