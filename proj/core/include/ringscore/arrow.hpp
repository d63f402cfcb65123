#pragma once

#include <cstdint>
#include <string>

#include "ringscore/imgproc.hpp"
#include "ringscore/target.hpp"

namespace ringscore {

struct ArrowParams {
  std::uint16_t diff_threshold = 40;
  /// Height of the vertical structuring element; must be odd.
  int se_height = 15;
  /// The two largest blobs within this fraction of each other is ambiguous.
  double ambiguity_ratio = 0.10;
};

/// Vertical element height for an image of `image_height` rows, scaled from
/// `reference` px at 960 rows and forced odd.
int scaled_se_height(int image_height, int reference = 15, int reference_rows = 960);

struct ArrowDetection {
  std::string camera_id;
  Component blob;
  Pixel tip;  ///< blob pixel nearest the target center
  std::uint16_t diff_peak = 0;
};

/// Blob pixel whose center is nearest `center`; ties go to the smaller (y, x).
/// Throws EmptyBlob.
Pixel tip_point(const Component& blob, Vec2 center);

/// Differences consecutive frames, keeps changes inside the target mask,
/// opens with a vertical element and takes the largest blob.
/// Throws NoArrowDetected, AmbiguousDetection or DimensionMismatch.
ArrowDetection detect_arrow(const RgbImage& prev, const RgbImage& curr, const TargetModel& target,
                            const ArrowParams& params, const std::string& camera_id = {});

}  // namespace ringscore
