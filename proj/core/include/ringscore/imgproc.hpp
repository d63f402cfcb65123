#pragma once

#include <vector>

#include "ringscore/geometry.hpp"
#include "ringscore/raster.hpp"

namespace ringscore {

/// Rectangular structuring element anchored at its center pixel.
/// Both sides are odd so the anchor is well defined.
class StructuringElement {
 public:
  static StructuringElement rect(int width, int height);
  static StructuringElement square(int side) { return rect(side, side); }
  static StructuringElement vertical(int height) { return rect(1, height); }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int half_width() const noexcept { return width_ / 2; }
  int half_height() const noexcept { return height_ / 2; }

 private:
  StructuringElement(int w, int h) : width_(w), height_(h) {}
  int width_;
  int height_;
};

/// Separable Gaussian, kernel radius ceil(3 sigma), symmetric-reflected borders.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// Edge-preserving smoothing over a (2r+1)^2 window. radius < 0 selects
/// ceil(2 * sigma_space).
GrayImage bilateral_smooth(const GrayImage& image, double sigma_space, double sigma_range, int radius = -1);

struct Gradient {
  FloatField gx;
  FloatField gy;
  FloatField magnitude;
  /// atan2(gy, gx) in radians, image axes (y down).
  FloatField direction;
};

/// 3x3 Sobel with reflected borders. Requires width, height >= 3.
Gradient sobel_gradient(const GrayImage& image);

/// Gradient direction quantized to 0, 45, 90 or 135 degrees (returned as 0..3).
/// Bin boundaries at 22.5 + 45k degrees; a direction exactly on a boundary
/// belongs to the lower bin.
int quantize_direction(double radians) noexcept;

/// Non-maximum suppression over a gradient field; returns the thinned magnitude.
FloatField non_maximum_suppression(const Gradient& gradient);

/// Canny: blur(sigma) -> Sobel -> NMS -> 8-connected hysteresis.
/// Magnitudes > high seed edges; magnitudes in (low, high] survive only when
/// connected to a seed.
BitMask canny(const GrayImage& image, double low, double high, double sigma = 1.4);

// Binary morphology. Pixels outside the image count as clear.
BitMask erode(const BitMask& mask, const StructuringElement& se);
BitMask dilate(const BitMask& mask, const StructuringElement& se);
/// erode, then dilate.
BitMask opening(const BitMask& mask, const StructuringElement& se);
/// dilate, then erode.
BitMask closing(const BitMask& mask, const StructuringElement& se);

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;
  friend bool operator==(BoundingBox, BoundingBox) = default;
};

struct Component {
  /// Member pixels in raster order; pixels.front() is the topmost-leftmost pixel.
  std::vector<Pixel> pixels;
  BoundingBox box;

  std::size_t area() const noexcept { return pixels.size(); }
};

enum class Connectivity { Four, Eight };

/// Maximal 8-connected (default) components, ordered by their topmost-leftmost pixel.
std::vector<Component> connected_components(const BitMask& mask, Connectivity connectivity = Connectivity::Eight);

struct Contour {
  std::vector<Pixel> points;
};

/// Outer boundary of every 8-connected component by Moore-neighbor tracing,
/// clockwise on screen, starting at the component's topmost-leftmost pixel.
/// Same order as connected_components(). Tracing always walks the 8-neighborhood;
/// `connectivity` only decides which pixels form one component.
std::vector<Contour> trace_contours(const BitMask& mask, Connectivity connectivity = Connectivity::Eight);

}  // namespace ringscore
