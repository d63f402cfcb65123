#pragma once

#include <Eigen/Core>
#include <span>

#include "ringscore/ellipse.hpp"
#include "ringscore/target.hpp"

namespace ringscore {

/// 3x3 matrix acting on homogeneous 2-D points.
struct PlanarTransform {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

  static PlanarTransform identity() { return {}; }
  static PlanarTransform translation(double dx, double dy);
  static PlanarTransform rotation(double radians);
  static PlanarTransform scaling(double sx, double sy);

  /// Throws Degenerate if |det| <= 1e-12.
  PlanarTransform inverse() const;
  friend PlanarTransform operator*(const PlanarTransform& a, const PlanarTransform& b) { return {a.m * b.m}; }
};

/// Throws AtInfinity when the homogeneous w component is below 1e-12 in magnitude.
Vec2 apply_transform(const PlanarTransform& t, Vec2 p);

/// Symmetric 3x3 matrix form of a conic (x^T C x = 0).
Eigen::Matrix3d conic_matrix(const Conic& q);
Conic conic_from_matrix(const Eigen::Matrix3d& c);
/// Image of a conic under t: C' = t^-T C t^-1.
Conic transform_conic(const PlanarTransform& t, const Conic& q);

/// Affine map that fixes the center and the major-axis endpoints and
/// stretches the minor axis by a / b, sending the ellipse onto the circle of
/// radius a about its center.
PlanarTransform ellipse_to_circle(const Ellipse& e);

/// Image of the common center of two concentric circles, given their
/// images. Exact under any projective view; falls back to the inner
/// ellipse's center if the pencil is degenerate.
Vec2 concentric_center(const Ellipse& outer, const Ellipse& inner);

/// A rectified scoring frame: rings become circles of `outer_radius *
/// ratio` around `center` after mapping points through `transform`.
struct Rectification {
  PlanarTransform transform;
  Vec2 center;          ///< rectified-plane center
  double outer_radius;  ///< rectified radius of the outermost ring
};

/// Affine rectification of the outermost ring only (ellipse_to_circle).
Rectification affine_rectification(const TargetModel& target);

/// Sends the polar line of `center_image` with respect to the outer ring to
/// infinity, then applies ellipse_to_circle. When center_image is the true
/// image of the face center, this removes perspective foreshortening as well.
Rectification perspective_rectification(const Ellipse& outer, Vec2 center_image);

/// perspective_rectification using the outermost ring and the center implied
/// by the outermost and innermost rings.
Rectification perspective_rectification(const TargetModel& target);

/// Buckets the rectified distance of p from the center by `ring_radii`
/// (strictly increasing, innermost first; boundary counts inward).
/// `ring_values` lists points outermost first, so radius i scores
/// ring_values[n - 1 - i]. Returns 0 beyond the largest radius.
int score_point_rectified(const Rectification& frame, std::span<const double> ring_radii,
                          std::span<const int> ring_values, Vec2 p);

/// outer_radius * ratio for every ratio.
std::vector<double> radii_from_ratios(const Rectification& frame, std::span<const double> ratios);

}  // namespace ringscore
