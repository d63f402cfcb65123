#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ringscore/raster.hpp"
#include "ringscore/rectify.hpp"

namespace ringscore {

/// Synthetic target face. Plane coordinates are pixels of the unwarped face,
/// with the face center at `center`.
struct TargetSpec {
  Vec2 center{640.0, 480.0};
  double outer_radius = 400.0;
  /// Strictly increasing, last = 1.0; innermost ring first.
  std::vector<double> ring_radii_ratios;
  /// Annulus colors aligned with ring_radii_ratios (innermost first).
  std::vector<Rgb> ring_colors;
  Rgb background{255, 255, 255};
  /// Rotation of the face about its horizontal axis, radians.
  double tilt = 0.0;
  double noise_sigma = 0.0;
  /// Width of the divider line painted on ring boundaries whose neighboring
  /// colors are too close in luma to show an edge (0 disables lines).
  double line_width = 2.0;
  /// Viewing distance in multiples of outer_radius.
  double view_distance = 3.0;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

/// 10 equally spaced rings, yellow/red/blue/black/white from the center out.
TargetSpec default_face(Vec2 center = {640.0, 480.0}, double outer_radius = 400.0);

/// Throws BadParameter when `spec` breaks its invariants.
void validate(const TargetSpec& spec);

struct ShotSpec {
  Vec2 true_tip;              ///< plane coordinates
  double shaft_angle = 0.0;   ///< from vertical; 0 extends toward +y (down), pi toward -y
  double shaft_length = 60.0;
  double shaft_width = 3.0;
  Rgb shaft_color{40, 190, 60};
};

/// Plane -> image homography: rotate the face by `tilt` about the horizontal
/// line through its center and project it from `view_distance * outer_radius`
/// with unit magnification at the center. The center is a fixed point.
PlanarTransform plane_to_image(const TargetSpec& spec);

/// Noise-free rendering of one or more faces over the first face's background.
RgbImage render_clean(std::span<const TargetSpec> specs, int width, int height);

/// Clean rendering plus Gaussian noise (spec.noise_sigma) seeded by `seed`.
/// Throws OutOfFrame when the warped face leaves the frame.
RgbImage render_target(const TargetSpec& spec, int width, int height, std::uint64_t seed);
RgbImage render_targets(std::span<const TargetSpec> specs, int width, int height, std::uint64_t seed);

/// Paints the shaft (a rectangle in the plane, near end centered on the tip)
/// through the face's warp. Throws OutOfFrame if the tip or every shaft pixel
/// falls outside the image.
RgbImage render_shot(const RgbImage& image, const TargetSpec& spec, const ShotSpec& shot);

/// splitmix64 mix of a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(std::mt19937_64& rng);

/// Adds N(0, sigma^2) to every channel using the documented generator:
/// std::mt19937_64(seed), 53-bit uniforms, Box-Muller pairs consumed in
/// (cos, sin) order, pixels row-major, channels R, G, B; rounded and clamped.
RgbImage add_noise(const RgbImage& image, double sigma, std::uint64_t seed);

/// Uniform brightness change of every channel, clamped.
RgbImage adjust_brightness(const RgbImage& image, int offset);

/// Analytic score of a plane point: ring_values are outermost first.
int true_score(const TargetSpec& spec, Vec2 tip, std::span<const int> ring_values);

/// Distance in plane pixels from `tip` to the nearest ring boundary.
double boundary_margin(const TargetSpec& spec, Vec2 tip);

}  // namespace ringscore
