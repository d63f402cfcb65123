#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringscore/ellipse.hpp"
#include "ringscore/raster.hpp"

namespace ringscore {

/// User-supplied target centers for one camera (the calibration "click").
struct CalibrationHint {
  std::string camera_id;
  std::vector<Vec2> target_centers;
};

struct RingModel {
  Ellipse boundary;
  int score = 0;
  friend bool operator==(const RingModel&, const RingModel&) = default;
};

struct TargetModel {
  Vec2 center;              ///< hint center
  Ellipse outer_boundary;   ///< largest ring expanded by mask_expand
  BitMask outer_mask;       ///< rasterized outer_boundary
  std::vector<RingModel> rings;  ///< strictly decreasing area, outermost first
  friend bool operator==(const TargetModel&, const TargetModel&) = default;
};

struct DetectionParams {
  double bilateral_sigma_space = 3.0;
  double bilateral_sigma_range = 25.0;
  double canny_low = 50.0;
  double canny_high = 150.0;
  double canny_sigma = 1.4;
  double center_gate = 100.0;   ///< max distance of a ring center from the hint
  double mask_expand = 50.0;    ///< full-axis growth of the outer mask
  double min_ring_fraction = 0.05;
  double ring_merge_tol = 6.0;
  /// Contours whose mean radial distance to their fitted ellipse exceeds this are dropped.
  double max_fit_residual = 2.0;
  /// Point values, outermost ring first; strictly increasing.
  std::vector<int> ring_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

void validate(const DetectionParams& params);

/// Ellipses fitted to every usable edge contour of the image, before any
/// per-target gating. Exposed for diagnostics and multi-target assignment.
std::vector<Ellipse> candidate_ellipses(const RgbImage& image, const DetectionParams& params);

/// Builds the ring model for one hint from already-gated candidates.
/// Throws NoTargetFound when `candidates` is empty.
TargetModel build_target_model(std::vector<Ellipse> candidates, Vec2 hint, int width, int height,
                               const DetectionParams& params);

TargetModel detect_target(const RgbImage& image, Vec2 hint, const DetectionParams& params);

/// One model per hint. Each candidate ellipse is claimed by its nearest hint.
/// NoTargetFound messages carry the failing hint index.
std::vector<TargetModel> detect_all_targets(const RgbImage& image, const CalibrationHint& hints,
                                            const DetectionParams& params);

/// Rebuilds outer_boundary and outer_mask from the rings (used when loading
/// a saved calibration).
TargetModel assemble_target(Vec2 center, std::vector<RingModel> rings, double mask_expand, int width, int height);

}  // namespace ringscore
