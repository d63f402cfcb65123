#include "ringscore/rectify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace ringscore {

PlanarTransform PlanarTransform::translation(double dx, double dy) {
  PlanarTransform t;
  t.m(0, 2) = dx;
  t.m(1, 2) = dy;
  return t;
}

PlanarTransform PlanarTransform::rotation(double radians) {
  PlanarTransform t;
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  t.m(0, 0) = c;
  t.m(0, 1) = -s;
  t.m(1, 0) = s;
  t.m(1, 1) = c;
  return t;
}

PlanarTransform PlanarTransform::scaling(double sx, double sy) {
  PlanarTransform t;
  t.m(0, 0) = sx;
  t.m(1, 1) = sy;
  return t;
}

PlanarTransform PlanarTransform::inverse() const {
  if (!(std::abs(m.determinant()) > 1e-12)) throw Error(ErrorCode::Degenerate, "transform is not invertible");
  return {m.inverse()};
}

Vec2 apply_transform(const PlanarTransform& t, Vec2 p) {
  const Eigen::Vector3d h = t.m * Eigen::Vector3d(p.x, p.y, 1.0);
  if (std::abs(h(2)) < 1e-12) throw Error(ErrorCode::AtInfinity, "point maps to infinity");
  return {h(0) / h(2), h(1) / h(2)};
}

Eigen::Matrix3d conic_matrix(const Conic& q) {
  Eigen::Matrix3d c;
  c << q.a, q.b / 2, q.d / 2,  //
      q.b / 2, q.c, q.e / 2,   //
      q.d / 2, q.e / 2, q.f;
  return c;
}

Conic conic_from_matrix(const Eigen::Matrix3d& c) {
  return {c(0, 0), c(0, 1) + c(1, 0), c(1, 1), c(0, 2) + c(2, 0), c(1, 2) + c(2, 1), c(2, 2)};
}

Conic transform_conic(const PlanarTransform& t, const Conic& q) {
  const Eigen::Matrix3d inv = t.inverse().m;
  return conic_from_matrix(inv.transpose() * conic_matrix(q) * inv);
}

PlanarTransform ellipse_to_circle(const Ellipse& e) {
  const double stretch = e.semi_major / e.semi_minor;
  return PlanarTransform::translation(e.center.x, e.center.y) * PlanarTransform::rotation(e.theta) *
         PlanarTransform::scaling(1.0, stretch) * PlanarTransform::rotation(-e.theta) *
         PlanarTransform::translation(-e.center.x, -e.center.y);
}

Vec2 concentric_center(const Ellipse& outer, const Ellipse& inner) {
  // The common center is the generalized eigenvector of the pencil whose
  // eigenvalue differs from the other (double) one.
  const Eigen::Matrix3d c_outer = conic_matrix(to_conic(outer));
  const Eigen::Matrix3d c_inner = conic_matrix(to_conic(inner));
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(c_inner.inverse() * c_outer);
  if (solver.info() != Eigen::Success) return inner.center;
  const auto values = solver.eigenvalues();
  int lone = -1;
  double best_gap = -1.0;
  for (int i = 0; i < 3; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
      if (j != i) gap = std::min(gap, std::abs(values(i) - values(j)));
    }
    if (gap > best_gap) {
      best_gap = gap;
      lone = i;
    }
  }
  const Eigen::Vector3cd v = solver.eigenvectors().col(lone);
  if (std::abs(v(2)) < 1e-12) return inner.center;
  const Vec2 c{(v(0) / v(2)).real(), (v(1) / v(2)).real()};
  // A pencil this badly conditioned would put the center far from both fits.
  if (distance(c, inner.center) > inner.semi_major) return inner.center;
  return c;
}

Rectification affine_rectification(const TargetModel& target) {
  const Ellipse& outer = target.rings.front().boundary;
  return {ellipse_to_circle(outer), outer.center, outer.semi_major};
}

Rectification perspective_rectification(const Ellipse& outer, Vec2 center_image) {
  const Eigen::Matrix3d c = conic_matrix(to_conic(outer));
  const Eigen::Vector3d x(center_image.x, center_image.y, 1.0);
  Eigen::Vector3d polar = c * x;
  const double scale = polar.dot(x);
  if (!(std::abs(scale) > 1e-15)) throw Error(ErrorCode::Degenerate, "center lies on the outer ring");
  polar /= scale;  // the center keeps w = 1
  PlanarTransform to_affine;
  to_affine.m.row(2) = polar.transpose();
  const Ellipse affine_outer = from_conic(transform_conic(to_affine, to_conic(outer)));
  const PlanarTransform full = ellipse_to_circle(affine_outer) * to_affine;
  return {full, apply_transform(full, center_image), affine_outer.semi_major};
}

Rectification perspective_rectification(const TargetModel& target) {
  const Ellipse& outer = target.rings.front().boundary;
  const Ellipse& inner = target.rings.back().boundary;
  const Vec2 center = target.rings.size() > 1 ? concentric_center(outer, inner) : outer.center;
  return perspective_rectification(outer, center);
}

int score_point_rectified(const Rectification& frame, std::span<const double> ring_radii,
                          std::span<const int> ring_values, Vec2 p) {
  if (ring_radii.size() != ring_values.size()) {
    throw Error(ErrorCode::BadParameter, "ring radii and values differ in length");
  }
  const double r = distance(apply_transform(frame.transform, p), frame.center);
  const std::size_t n = ring_radii.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (r <= ring_radii[i]) return ring_values[n - 1 - i];
  }
  return 0;
}

std::vector<double> radii_from_ratios(const Rectification& frame, std::span<const double> ratios) {
  std::vector<double> radii;
  radii.reserve(ratios.size());
  for (const double r : ratios) radii.push_back(frame.outer_radius * r);
  return radii;
}

}  // namespace ringscore
