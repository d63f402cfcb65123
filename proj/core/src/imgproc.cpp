#include "ringscore/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>

namespace ringscore {

namespace {

// Symmetric reflection: -1 -> 0, -2 -> 1, n -> n-1.
int reflect(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

std::uint8_t to_u8(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

// Sliding-window count along one axis; `keep(count, window)` decides the output bit.
template <typename Keep>
BitMask sweep(const BitMask& in, int half, bool horizontal, Keep keep) {
  if (half == 0) return in;
  BitMask out(in.width(), in.height());
  const int window = 2 * half + 1;
  const int lines = horizontal ? in.height() : in.width();
  const int length = horizontal ? in.width() : in.height();
  auto at = [&](int line, int pos) -> int {
    if (pos < 0 || pos >= length) return 0;
    return horizontal ? in(pos, line) : in(line, pos);
  };
  for (int line = 0; line < lines; ++line) {
    int count = 0;
    for (int pos = -half; pos <= half; ++pos) count += at(line, pos);
    for (int pos = 0; pos < length; ++pos) {
      const std::uint8_t bit = keep(count, window) ? 1 : 0;
      if (horizontal) {
        out(pos, line) = bit;
      } else {
        out(line, pos) = bit;
      }
      count += at(line, pos + half + 1) - at(line, pos - half);
    }
  }
  return out;
}

constexpr std::array<Pixel, 8> kClockwise = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

int direction_index(int dx, int dy) noexcept {
  for (int i = 0; i < 8; ++i) {
    if (kClockwise[static_cast<std::size_t>(i)].x == dx && kClockwise[static_cast<std::size_t>(i)].y == dy) return i;
  }
  return -1;
}

Plane<int> label_components(const BitMask& mask, Connectivity connectivity, std::vector<Component>& components) {
  const std::size_t step = connectivity == Connectivity::Four ? 2 : 1;
  Plane<int> labels(mask.width(), mask.height(), -1);
  std::vector<Pixel> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || labels(x, y) >= 0) continue;
      const int id = static_cast<int>(components.size());
      Component comp;
      comp.box = {x, y, x, y};
      labels(x, y) = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        comp.box.min_x = std::min(comp.box.min_x, p.x);
        comp.box.min_y = std::min(comp.box.min_y, p.y);
        comp.box.max_x = std::max(comp.box.max_x, p.x);
        comp.box.max_y = std::max(comp.box.max_y, p.y);
        for (std::size_t k = 0; k < kClockwise.size(); k += step) {
          const int nx = p.x + kClockwise[k].x;
          const int ny = p.y + kClockwise[k].y;
          if (mask.contains(nx, ny) && mask(nx, ny) && labels(nx, ny) < 0) {
            labels(nx, ny) = id;
            stack.push_back({nx, ny});
          }
        }
      }
      std::sort(comp.pixels.begin(), comp.pixels.end());
      components.push_back(std::move(comp));
    }
  }
  return labels;
}

Contour moore_trace(const Plane<int>& labels, int id, Pixel start, std::size_t area) {
  auto inside = [&](Pixel p) { return labels.contains(p.x, p.y) && labels(p.x, p.y) == id; };
  Contour contour;
  contour.points.push_back(start);
  // The start is the raster-first pixel, so its west neighbor is clear.
  Pixel current = start;
  int backtrack = 4;
  Pixel second{};
  bool moved = false;
  const std::size_t limit = 8 * area + 16;
  for (std::size_t step = 0; step < limit; ++step) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (backtrack + k) % 8;
      const Pixel q{current.x + kClockwise[static_cast<std::size_t>(d)].x,
                    current.y + kClockwise[static_cast<std::size_t>(d)].y};
      if (inside(q)) {
        found = d;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    const Pixel next{current.x + kClockwise[static_cast<std::size_t>(found)].x,
                     current.y + kClockwise[static_cast<std::size_t>(found)].y};
    if (moved && current == start && next == second) break;
    if (!moved) {
      second = next;
      moved = true;
    }
    const Pixel probe = kClockwise[static_cast<std::size_t>((found + 7) % 8)];
    const Pixel before{current.x + probe.x, current.y + probe.y};
    backtrack = direction_index(before.x - next.x, before.y - next.y);
    current = next;
    contour.points.push_back(current);
  }
  if (contour.points.size() > 1 && contour.points.back() == start) contour.points.pop_back();
  return contour;
}

}  // namespace

StructuringElement StructuringElement::rect(int width, int height) {
  if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
    throw Error(ErrorCode::BadParameter, "structuring element sides must be odd and >= 1, got " +
                                             std::to_string(width) + "x" + std::to_string(height));
  }
  return {width, height};
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::BadParameter, "gaussian sigma must be > 0");
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = image.width();
  const int h = image.height();
  FloatField rows(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * image(reflect(x + k, w), y);
      }
      rows(x, y) = static_cast<float>(acc);
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * rows(x, reflect(y + k, h));
      }
      out(x, y) = to_u8(acc);
    }
  }
  return out;
}

GrayImage bilateral_smooth(const GrayImage& image, double sigma_space, double sigma_range, int radius) {
  if (!(sigma_space > 0.0) || !(sigma_range > 0.0)) {
    throw Error(ErrorCode::BadParameter, "bilateral sigmas must be > 0");
  }
  if (radius < 0) radius = static_cast<int>(std::ceil(2.0 * sigma_space));
  const int side = 2 * radius + 1;
  std::vector<double> spatial(static_cast<std::size_t>(side * side));
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      spatial[static_cast<std::size_t>((dy + radius) * side + dx + radius)] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_space * sigma_space));
    }
  }
  std::array<double, 256> range{};
  for (int d = 0; d < 256; ++d) range[static_cast<std::size_t>(d)] = std::exp(-(d * d) / (2.0 * sigma_range * sigma_range));

  const int w = image.width();
  const int h = image.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int center = image(x, y);
      double num = 0.0;
      double den = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = reflect(y + dy, h);
        const double* srow = &spatial[static_cast<std::size_t>((dy + radius) * side)];
        for (int dx = -radius; dx <= radius; ++dx) {
          const int v = image(reflect(x + dx, w), yy);
          const double wgt = srow[dx + radius] * range[static_cast<std::size_t>(std::abs(v - center))];
          num += wgt * v;
          den += wgt;
        }
      }
      out(x, y) = to_u8(num / den);
    }
  }
  return out;
}

Gradient sobel_gradient(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 3 || h < 3) throw Error(ErrorCode::TooSmall, "sobel needs at least 3x3 pixels");
  Gradient g{FloatField(w, h), FloatField(w, h), FloatField(w, h), FloatField(w, h)};
  for (int y = 0; y < h; ++y) {
    const int ym = reflect(y - 1, h);
    const int yp = reflect(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = reflect(x - 1, w);
      const int xp = reflect(x + 1, w);
      const int gx = (image(xp, ym) + 2 * image(xp, y) + image(xp, yp)) -
                     (image(xm, ym) + 2 * image(xm, y) + image(xm, yp));
      const int gy = (image(xm, yp) + 2 * image(x, yp) + image(xp, yp)) -
                     (image(xm, ym) + 2 * image(x, ym) + image(xp, ym));
      g.gx(x, y) = static_cast<float>(gx);
      g.gy(x, y) = static_cast<float>(gy);
      g.magnitude(x, y) = static_cast<float>(std::sqrt(double(gx) * gx + double(gy) * gy));
      g.direction(x, y) = static_cast<float>(std::atan2(double(gy), double(gx)));
    }
  }
  return g;
}

int quantize_direction(double radians) noexcept {
  double deg = radians * 180.0 / std::numbers::pi;
  deg = std::fmod(deg, 180.0);
  if (deg < 0.0) deg += 180.0;
  if (deg <= 22.5) return 0;
  if (deg <= 67.5) return 1;
  if (deg <= 112.5) return 2;
  if (deg <= 157.5) return 3;
  return 0;
}

FloatField non_maximum_suppression(const Gradient& gradient) {
  // Neighbor offsets along the quantized gradient, y down.
  static constexpr std::array<Pixel, 4> kAlong = {{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
  const FloatField& mag = gradient.magnitude;
  const int w = mag.width();
  const int h = mag.height();
  FloatField out(w, h);
  auto sample = [&](int x, int y) -> float { return mag.contains(x, y) ? mag(x, y) : 0.0f; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float m = mag(x, y);
      if (m <= 0.0f) continue;
      const Pixel d = kAlong[static_cast<std::size_t>(quantize_direction(gradient.direction(x, y)))];
      const float ahead = sample(x + d.x, y + d.y);
      const float behind = sample(x - d.x, y - d.y);
      // Plateaus keep only their first pixel along the gradient.
      if (m > behind && m >= ahead) out(x, y) = m;
    }
  }
  return out;
}

BitMask canny(const GrayImage& image, double low, double high, double sigma) {
  if (low < 0.0 || high < 0.0 || low > high) {
    throw Error(ErrorCode::BadParameter, "canny thresholds need 0 <= low <= high");
  }
  const Gradient gradient = sobel_gradient(gaussian_blur(image, sigma));
  const FloatField thin = non_maximum_suppression(gradient);
  const int w = thin.width();
  const int h = thin.height();
  BitMask edges(w, h);
  std::deque<Pixel> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thin(x, y) > high) {
        edges(x, y) = 1;
        queue.push_back({x, y});
      }
    }
  }
  while (!queue.empty()) {
    const Pixel p = queue.front();
    queue.pop_front();
    for (const Pixel d : kClockwise) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (!thin.contains(nx, ny) || edges(nx, ny)) continue;
      if (thin(nx, ny) > low) {
        edges(nx, ny) = 1;
        queue.push_back({nx, ny});
      }
    }
  }
  return edges;
}

BitMask erode(const BitMask& mask, const StructuringElement& se) {
  auto all = [](int count, int window) { return count == window; };
  return sweep(sweep(mask, se.half_width(), true, all), se.half_height(), false, all);
}

BitMask dilate(const BitMask& mask, const StructuringElement& se) {
  auto any = [](int count, int) { return count > 0; };
  return sweep(sweep(mask, se.half_width(), true, any), se.half_height(), false, any);
}

BitMask opening(const BitMask& mask, const StructuringElement& se) { return dilate(erode(mask, se), se); }

BitMask closing(const BitMask& mask, const StructuringElement& se) { return erode(dilate(mask, se), se); }

std::vector<Component> connected_components(const BitMask& mask, Connectivity connectivity) {
  std::vector<Component> components;
  label_components(mask, connectivity, components);
  return components;
}

std::vector<Contour> trace_contours(const BitMask& mask, Connectivity connectivity) {
  std::vector<Component> components;
  const Plane<int> labels = label_components(mask, connectivity, components);
  std::vector<Contour> contours;
  contours.reserve(components.size());
  for (std::size_t id = 0; id < components.size(); ++id) {
    contours.push_back(
        moore_trace(labels, static_cast<int>(id), components[id].pixels.front(), components[id].area()));
  }
  return contours;
}

}  // namespace ringscore
