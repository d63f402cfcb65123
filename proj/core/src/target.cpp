#include "ringscore/target.hpp"

#include <algorithm>
#include <cmath>

#include "ringscore/imgproc.hpp"

namespace ringscore {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Componentwise median; the axis angle is averaged on the doubled circle.
Ellipse median_ellipse(const std::vector<Ellipse>& cluster) {
  std::vector<double> cx, cy, major, minor;
  double c2 = 0.0;
  double s2 = 0.0;
  for (const Ellipse& e : cluster) {
    cx.push_back(e.center.x);
    cy.push_back(e.center.y);
    major.push_back(e.semi_major);
    minor.push_back(e.semi_minor);
    const double weight = e.semi_major - e.semi_minor;
    c2 += weight * std::cos(2.0 * e.theta);
    s2 += weight * std::sin(2.0 * e.theta);
  }
  const double theta = (c2 == 0.0 && s2 == 0.0) ? cluster.front().theta : 0.5 * std::atan2(s2, c2);
  return make_ellipse({median(cx), median(cy)}, median(major), median(minor), theta);
}

}  // namespace

void validate(const DetectionParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::BadParameter, what);
  };
  require(p.bilateral_sigma_space > 0 && p.bilateral_sigma_range > 0, "bilateral sigmas must be > 0");
  require(p.canny_low >= 0 && p.canny_low <= p.canny_high, "need 0 <= canny_low <= canny_high");
  require(p.canny_sigma > 0, "canny_sigma must be > 0");
  require(p.center_gate >= 0 && p.mask_expand >= 0 && p.ring_merge_tol >= 0, "pixel parameters must be >= 0");
  require(p.min_ring_fraction >= 0 && p.min_ring_fraction <= 1, "min_ring_fraction must be in [0, 1]");
  require(p.max_fit_residual > 0, "max_fit_residual must be > 0");
  require(!p.ring_values.empty(), "ring_values must not be empty");
  for (std::size_t i = 0; i < p.ring_values.size(); ++i) {
    require(p.ring_values[i] >= 0, "ring values must be >= 0");
    if (i > 0) require(p.ring_values[i] > p.ring_values[i - 1], "ring values must strictly increase");
  }
}

std::vector<Ellipse> candidate_ellipses(const RgbImage& image, const DetectionParams& params) {
  validate(params);
  const GrayImage smooth =
      bilateral_smooth(to_gray(image), params.bilateral_sigma_space, params.bilateral_sigma_range);
  BitMask edges = canny(smooth, params.canny_low, params.canny_high, params.canny_sigma);
  // One erode/dilate pass; dilating first keeps one-pixel edges and bridges small gaps.
  edges = closing(edges, StructuringElement::square(3));

  const double max_axis = std::hypot(image.width(), image.height());
  // Each closed edge band is fitted through all of its pixels. Band pixels
  // straddle the intensity boundary symmetrically, so the fit is unbiased.
  std::vector<Contour> contours;
  for (Component& c : connected_components(edges)) contours.push_back({std::move(c.pixels)});

  std::vector<Ellipse> out;
  std::vector<Vec2> points;
  for (const Contour& contour : contours) {
    if (contour.points.size() < 5) continue;
    points.clear();
    for (const Pixel p : contour.points) points.push_back(pixel_center(p));
    Ellipse e;
    try {
      e = fit_ellipse(points);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::TooFewPoints || err.code() == ErrorCode::Degenerate) continue;
      throw;
    }
    if (e.semi_major > max_axis) continue;
    double residual = 0.0;
    for (const Vec2 p : points) residual += radial_distance(e, p);
    residual /= static_cast<double>(points.size());
    if (residual > params.max_fit_residual) continue;
    out.push_back(e);
  }
  return out;
}

TargetModel assemble_target(Vec2 center, std::vector<RingModel> rings, double mask_expand, int width, int height) {
  if (rings.empty()) throw Error(ErrorCode::TooFewRings, "target has no rings");
  TargetModel model;
  model.center = center;
  model.rings = std::move(rings);
  model.outer_boundary = expand(model.rings.front().boundary, mask_expand);
  model.outer_mask = ellipse_mask(model.outer_boundary, width, height);
  return model;
}

TargetModel build_target_model(std::vector<Ellipse> candidates, Vec2 hint, int width, int height,
                               const DetectionParams& params) {
  std::erase_if(candidates, [&](const Ellipse& e) { return distance(e.center, hint) > params.center_gate; });
  if (candidates.empty()) throw Error(ErrorCode::NoTargetFound, "no ellipse within the center gate");

  double largest_minor = 0.0;
  for (const Ellipse& e : candidates) largest_minor = std::max(largest_minor, e.semi_minor);
  std::erase_if(candidates,
                [&](const Ellipse& e) { return e.semi_minor < params.min_ring_fraction * largest_minor; });

  // Single-linkage clusters along the semi-major axis.
  std::sort(candidates.begin(), candidates.end(), [](const Ellipse& l, const Ellipse& r) {
    if (l.semi_major != r.semi_major) return l.semi_major < r.semi_major;
    if (l.semi_minor != r.semi_minor) return l.semi_minor < r.semi_minor;
    if (l.center.x != r.center.x) return l.center.x < r.center.x;
    return l.center.y < r.center.y;
  });
  std::vector<Ellipse> representatives;
  std::vector<Ellipse> cluster;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!cluster.empty() && candidates[i].semi_major - cluster.back().semi_major > params.ring_merge_tol) {
      representatives.push_back(median_ellipse(cluster));
      cluster.clear();
    }
    cluster.push_back(candidates[i]);
  }
  if (!cluster.empty()) representatives.push_back(median_ellipse(cluster));
  std::erase_if(representatives, [&](const Ellipse& e) { return distance(e.center, hint) > params.center_gate; });

  std::sort(representatives.begin(), representatives.end(),
            [](const Ellipse& l, const Ellipse& r) { return l.area() > r.area(); });
  std::vector<Ellipse> strict;
  for (const Ellipse& e : representatives) {
    if (strict.empty() || e.area() < strict.back().area()) strict.push_back(e);
  }
  if (strict.empty()) throw Error(ErrorCode::TooFewRings, "no ring survived clustering");
  if (strict.size() > params.ring_values.size()) strict.resize(params.ring_values.size());

  std::vector<RingModel> rings;
  for (std::size_t i = 0; i < strict.size(); ++i) rings.push_back({strict[i], params.ring_values[i]});
  return assemble_target(hint, std::move(rings), params.mask_expand, width, height);
}

TargetModel detect_target(const RgbImage& image, Vec2 hint, const DetectionParams& params) {
  CalibrationHint hints{"", {hint}};
  return detect_all_targets(image, hints, params).front();
}

std::vector<TargetModel> detect_all_targets(const RgbImage& image, const CalibrationHint& hints,
                                            const DetectionParams& params) {
  if (hints.target_centers.empty()) throw Error(ErrorCode::BadParameter, "at least one hint is required");
  for (const Vec2 h : hints.target_centers) {
    if (h.x < 0 || h.y < 0 || h.x >= image.width() || h.y >= image.height()) {
      throw Error(ErrorCode::BadParameter, "hint lies outside the image");
    }
  }
  const std::vector<Ellipse> candidates = candidate_ellipses(image, params);
  std::vector<std::vector<Ellipse>> claimed(hints.target_centers.size());
  for (const Ellipse& e : candidates) {
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < hints.target_centers.size(); ++i) {
      if (distance(e.center, hints.target_centers[i]) < distance(e.center, hints.target_centers[nearest])) {
        nearest = i;
      }
    }
    claimed[nearest].push_back(e);
  }
  std::vector<TargetModel> models;
  for (std::size_t i = 0; i < hints.target_centers.size(); ++i) {
    try {
      models.push_back(build_target_model(std::move(claimed[i]), hints.target_centers[i], image.width(),
                                          image.height(), params));
    } catch (const Error& err) {
      std::string where = "hint " + std::to_string(i);
      if (!hints.camera_id.empty()) where = "camera " + hints.camera_id + ", " + where;
      throw Error(err.code(), where + ": " + err.what());
    }
  }
  return models;
}

}  // namespace ringscore
