#include "ringscore/arrow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ringscore {

int scaled_se_height(int image_height, int reference, int reference_rows) {
  const long scaled = std::lround(static_cast<double>(reference) * image_height / reference_rows);
  int h = static_cast<int>(std::max(1L, scaled));
  if (h % 2 == 0) ++h;
  return h;
}

Pixel tip_point(const Component& blob, Vec2 center) {
  if (blob.pixels.empty()) throw Error(ErrorCode::EmptyBlob, "blob has no pixels");
  Pixel best = blob.pixels.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Pixel p : blob.pixels) {
    const Vec2 c = pixel_center(p);
    const double d2 = (c.x - center.x) * (c.x - center.x) + (c.y - center.y) * (c.y - center.y);
    if (d2 < best_d2 || (d2 == best_d2 && p < best)) {
      best = p;
      best_d2 = d2;
    }
  }
  return best;
}

ArrowDetection detect_arrow(const RgbImage& prev, const RgbImage& curr, const TargetModel& target,
                            const ArrowParams& params, const std::string& camera_id) {
  const DiffImage diff = abs_diff_rgb(prev, curr);
  if (!target.outer_mask.same_shape(diff)) {
    throw Error(ErrorCode::DimensionMismatch, "target mask does not match frame size");
  }
  const BitMask changed = mask_and(threshold(diff, params.diff_threshold), target.outer_mask);
  const BitMask shaft = opening(changed, StructuringElement::vertical(params.se_height));
  std::vector<Component> blobs = connected_components(shaft);
  if (blobs.empty()) throw Error(ErrorCode::NoArrowDetected, "no change survived the vertical opening");

  std::stable_sort(blobs.begin(), blobs.end(),
                   [](const Component& l, const Component& r) { return l.area() > r.area(); });
  if (blobs.size() > 1 &&
      static_cast<double>(blobs[1].area()) >= (1.0 - params.ambiguity_ratio) * static_cast<double>(blobs[0].area())) {
    throw Error(ErrorCode::AmbiguousDetection, "two change regions of similar size (" +
                                                   std::to_string(blobs[0].area()) + " vs " +
                                                   std::to_string(blobs[1].area()) + " px)");
  }

  ArrowDetection out;
  out.camera_id = camera_id;
  out.blob = std::move(blobs.front());
  out.tip = tip_point(out.blob, target.center);
  for (const Pixel p : out.blob.pixels) out.diff_peak = std::max(out.diff_peak, diff(p.x, p.y));
  return out;
}

}  // namespace ringscore
