#include "ringscore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

namespace ringscore {

namespace {

constexpr Rgb kYellow{255, 230, 0};
constexpr Rgb kRed{230, 30, 40};
constexpr Rgb kBlue{40, 120, 230};
constexpr Rgb kBlack{15, 15, 15};
constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kDarkLine{25, 25, 25};
constexpr Rgb kLightLine{235, 235, 235};
constexpr Rgb kCross{20, 20, 20};

int luma(Rgb c) { return (299 * c.r + 587 * c.g + 114 * c.b + 500) / 1000; }

// Boundaries whose two colors already differ this much in luma get no line.
constexpr int kVisibleContrast = 80;

std::optional<Rgb> line_color(const TargetSpec& spec, std::size_t boundary) {
  const int inside = luma(spec.ring_colors[boundary]);
  const int outside =
      luma(boundary + 1 < spec.ring_colors.size() ? spec.ring_colors[boundary + 1] : spec.background);
  if (std::abs(inside - outside) >= kVisibleContrast) return std::nullopt;
  const int dark = std::min(std::abs(inside - luma(kDarkLine)), std::abs(outside - luma(kDarkLine)));
  const int light = std::min(std::abs(inside - luma(kLightLine)), std::abs(outside - luma(kLightLine)));
  return dark >= light ? kDarkLine : kLightLine;
}

std::optional<Rgb> face_color(const TargetSpec& spec, Vec2 q) {
  const double dx = q.x - spec.center.x;
  const double dy = q.y - spec.center.y;
  const double r = std::hypot(dx, dy);
  const double big_r = spec.outer_radius;
  const double half_line = spec.line_width / 2.0;
  if (r > big_r + half_line) return std::nullopt;

  const double cross_half = 0.04 * big_r;
  if (std::max(std::abs(dx), std::abs(dy)) <= cross_half &&
      (std::abs(dx - dy) <= std::numbers::sqrt2 || std::abs(dx + dy) <= std::numbers::sqrt2)) {
    return kCross;
  }
  if (spec.line_width > 0.0) {
    for (std::size_t i = 0; i < spec.ring_radii_ratios.size(); ++i) {
      if (std::abs(r - spec.ring_radii_ratios[i] * big_r) <= half_line) {
        if (const auto line = line_color(spec, i)) return line;
      }
    }
  }
  for (std::size_t i = 0; i < spec.ring_radii_ratios.size(); ++i) {
    if (r <= spec.ring_radii_ratios[i] * big_r) return spec.ring_colors[i];
  }
  return std::nullopt;
}

struct PixelWindow {
  int x0, y0, x1, y1;  // inclusive
  bool empty() const { return x0 > x1 || y0 > y1; }
};

// Bounding window of the warped face; false if any part leaves the frame.
bool face_window(const TargetSpec& spec, const PlanarTransform& warp, int width, int height, PixelWindow& win) {
  const double reach = spec.outer_radius + spec.line_width / 2.0 + 1.0;
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (int k = 0; k < 720; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 720.0;
    const Vec2 p = apply_transform(warp, {spec.center.x + reach * std::cos(a), spec.center.y + reach * std::sin(a)});
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  win = {static_cast<int>(std::floor(min_x)) - 1, static_cast<int>(std::floor(min_y)) - 1,
         static_cast<int>(std::ceil(max_x)) + 1, static_cast<int>(std::ceil(max_y)) + 1};
  const bool inside = min_x >= 0.0 && min_y >= 0.0 && max_x <= width && max_y <= height;
  win.x0 = std::max(win.x0, 0);
  win.y0 = std::max(win.y0, 0);
  win.x1 = std::min(win.x1, width - 1);
  win.y1 = std::min(win.y1, height - 1);
  return inside;
}

std::optional<Vec2> to_plane(const Eigen::Matrix3d& inverse, double u, double v) {
  const Eigen::Vector3d h = inverse * Eigen::Vector3d(u, v, 1.0);
  if (!(h(2) > 1e-12)) return std::nullopt;
  return Vec2{h(0) / h(2), h(1) / h(2)};
}

}  // namespace

TargetSpec default_face(Vec2 center, double outer_radius) {
  TargetSpec spec;
  spec.center = center;
  spec.outer_radius = outer_radius;
  for (int i = 1; i <= 10; ++i) spec.ring_radii_ratios.push_back(i / 10.0);
  spec.ring_colors = {kYellow, kYellow, kRed, kRed, kBlue, kBlue, kBlack, kBlack, kWhite, kWhite};
  return spec;
}

void validate(const TargetSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::BadParameter, what);
  };
  require(spec.outer_radius > 0.0, "outer_radius must be > 0");
  require(!spec.ring_radii_ratios.empty(), "ring_radii_ratios must not be empty");
  require(spec.ring_radii_ratios.size() == spec.ring_colors.size(), "one color per ring is required");
  for (std::size_t i = 0; i < spec.ring_radii_ratios.size(); ++i) {
    const double r = spec.ring_radii_ratios[i];
    require(r > 0.0 && r <= 1.0, "ring ratios must lie in (0, 1]");
    if (i > 0) require(r > spec.ring_radii_ratios[i - 1], "ring ratios must strictly increase");
  }
  require(spec.ring_radii_ratios.back() == 1.0, "the last ring ratio must be 1.0");
  require(spec.noise_sigma >= 0.0 && spec.line_width >= 0.0, "noise and line width must be >= 0");
  require(spec.view_distance > 1.0, "view_distance must exceed the face radius");
  require(std::abs(spec.tilt) < std::numbers::pi / 2.0, "tilt must be within (-pi/2, pi/2)");
}

PlanarTransform plane_to_image(const TargetSpec& spec) {
  const double d = spec.view_distance * spec.outer_radius;
  PlanarTransform project;
  project.m << d, 0.0, 0.0,               //
      0.0, d * std::cos(spec.tilt), 0.0,  //
      0.0, std::sin(spec.tilt), d;
  project.m /= d;
  return PlanarTransform::translation(spec.center.x, spec.center.y) * project *
         PlanarTransform::translation(-spec.center.x, -spec.center.y);
}

RgbImage render_clean(std::span<const TargetSpec> specs, int width, int height) {
  if (specs.empty()) throw Error(ErrorCode::BadParameter, "nothing to render");
  RgbImage image(width, height, specs.front().background);
  for (const TargetSpec& spec : specs) {
    validate(spec);
    const PlanarTransform warp = plane_to_image(spec);
    PixelWindow win{};
    if (!face_window(spec, warp, width, height, win)) {
      throw Error(ErrorCode::OutOfFrame, "target does not fit in the frame");
    }
    const Eigen::Matrix3d inverse = warp.inverse().m;
    for (int y = win.y0; y <= win.y1; ++y) {
      for (int x = win.x0; x <= win.x1; ++x) {
        const auto q = to_plane(inverse, x + 0.5, y + 0.5);
        if (!q) continue;
        if (const auto color = face_color(spec, *q)) image.set(x, y, *color);
      }
    }
  }
  return image;
}

RgbImage render_target(const TargetSpec& spec, int width, int height, std::uint64_t seed) {
  return render_targets(std::span<const TargetSpec>(&spec, 1), width, height, seed);
}

RgbImage render_targets(std::span<const TargetSpec> specs, int width, int height, std::uint64_t seed) {
  RgbImage image = render_clean(specs, width, height);
  const double sigma = specs.front().noise_sigma;
  return sigma > 0.0 ? add_noise(image, sigma, seed) : image;
}

RgbImage render_shot(const RgbImage& image, const TargetSpec& spec, const ShotSpec& shot) {
  if (!(shot.shaft_width >= 1.0) || !(shot.shaft_length >= 1.0)) {
    throw Error(ErrorCode::BadParameter, "shaft width and length must be >= 1");
  }
  const PlanarTransform warp = plane_to_image(spec);
  const Vec2 tip_image = apply_transform(warp, shot.true_tip);
  if (!(tip_image.x >= 0.0 && tip_image.y >= 0.0 && tip_image.x < image.width() && tip_image.y < image.height())) {
    throw Error(ErrorCode::OutOfFrame, "arrow tip falls outside the frame");
  }
  const Vec2 along{std::sin(shot.shaft_angle), std::cos(shot.shaft_angle)};
  const Vec2 across{along.y, -along.x};
  const double half = shot.shaft_width / 2.0;

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const double t : {0.0, shot.shaft_length}) {
    for (const double s : {-half, half}) {
      const Vec2 corner = apply_transform(warp, shot.true_tip + t * along + s * across);
      min_x = std::min(min_x, corner.x);
      max_x = std::max(max_x, corner.x);
      min_y = std::min(min_y, corner.y);
      max_y = std::max(max_y, corner.y);
    }
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x)) - 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y)) - 1);
  const int x1 = std::min(image.width() - 1, static_cast<int>(std::ceil(max_x)) + 1);
  const int y1 = std::min(image.height() - 1, static_cast<int>(std::ceil(max_y)) + 1);

  RgbImage out = image;
  const Eigen::Matrix3d inverse = warp.inverse().m;
  std::size_t painted = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const auto q = to_plane(inverse, x + 0.5, y + 0.5);
      if (!q) continue;
      const Vec2 rel = *q - shot.true_tip;
      const double t = rel.x * along.x + rel.y * along.y;
      const double s = rel.x * across.x + rel.y * across.y;
      if (t >= 0.0 && t <= shot.shaft_length && std::abs(s) <= half) {
        out.set(x, y, shot.shaft_color);
        ++painted;
      }
    }
  }
  if (painted == 0) throw Error(ErrorCode::OutOfFrame, "no shaft pixel falls inside the frame");
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

RgbImage add_noise(const RgbImage& image, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(ErrorCode::BadParameter, "noise sigma must be >= 0");
  RgbImage out = image;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  double spare = 0.0;
  bool have_spare = false;
  auto gaussian = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = static_cast<double>((rng() >> 11) + 1) * kScale;  // (0, 1]
    const double u2 = static_cast<double>(rng() >> 11) * kScale;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare = radius * std::sin(angle);
    have_spare = true;
    return radius * std::cos(angle);
  };
  for (std::uint8_t& byte : out.bytes()) {
    byte = static_cast<std::uint8_t>(std::clamp(std::lround(byte + sigma * gaussian()), 0L, 255L));
  }
  return out;
}

RgbImage adjust_brightness(const RgbImage& image, int offset) {
  RgbImage out = image;
  if (offset == 0) return out;
  for (std::uint8_t& byte : out.bytes()) byte = static_cast<std::uint8_t>(std::clamp(byte + offset, 0, 255));
  return out;
}

int true_score(const TargetSpec& spec, Vec2 tip, std::span<const int> ring_values) {
  if (ring_values.size() != spec.ring_radii_ratios.size()) {
    throw Error(ErrorCode::BadParameter, "one value per ring is required");
  }
  const double r = distance(tip, spec.center);
  const std::size_t n = ring_values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (r <= spec.ring_radii_ratios[i] * spec.outer_radius) return ring_values[n - 1 - i];
  }
  return 0;
}

double boundary_margin(const TargetSpec& spec, Vec2 tip) {
  const double r = distance(tip, spec.center);
  double margin = std::numeric_limits<double>::infinity();
  for (const double ratio : spec.ring_radii_ratios) margin = std::min(margin, std::abs(r - ratio * spec.outer_radius));
  return margin;
}

}  // namespace ringscore
