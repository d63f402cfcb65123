#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringscore/error.hpp"

namespace ringscore {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(Rgb, Rgb) = default;
};

/// Row-major single-channel raster. The tag keeps semantically different
/// planes (intensity, difference, mask) from converting into each other.
template <typename T, typename Tag = void>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error(ErrorCode::BadParameter, "negative raster size");
    values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  T& operator()(int x, int y) noexcept { return values_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return values_[index(x, y)]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  bool same_shape(int w, int h) const noexcept { return width_ == w && height_ == h; }
  template <typename P>
  bool same_shape(const P& other) const noexcept { return same_shape(other.width(), other.height()); }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

struct GrayTag;
struct DiffTag;
struct MaskTag;

using GrayImage = Plane<std::uint8_t, GrayTag>;
/// Per-pixel |dR| + |dG| + |dB|, range [0, 765].
using DiffImage = Plane<std::uint16_t, DiffTag>;
/// 1 = set / foreground, 0 = clear.
using BitMask = Plane<std::uint8_t, MaskTag>;
using FloatField = Plane<float>;

std::size_t count_set(const BitMask& mask);
BitMask mask_and(const BitMask& a, const BitMask& b);
BitMask mask_not(const BitMask& m);
/// True iff every set bit of `inner` is also set in `outer`.
bool is_subset(const BitMask& inner, const BitMask& outer);

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = offset(x, y);
    return {bytes_[i], bytes_[i + 1], bytes_[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    const std::size_t i = offset(x, y);
    bytes_[i] = c.r;
    bytes_[i + 1] = c.g;
    bytes_[i + 2] = c.b;
  }

  /// Interleaved R,G,B bytes, row-major, length width * height * 3.
  std::span<std::uint8_t> bytes() noexcept { return bytes_; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Binary PPM (P6, maxval 255).
RgbImage load_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_ppm(const RgbImage& image);
RgbImage read_ppm_file(const std::string& path);
void write_ppm_file(const std::string& path, const RgbImage& image);

/// ITU-R 601 luma, rounded.
GrayImage to_gray(const RgbImage& image);

DiffImage abs_diff_rgb(const RgbImage& a, const RgbImage& b);

/// Set where value > level (strict).
BitMask threshold(const DiffImage& diff, std::uint16_t level);

RgbImage apply_mask(const RgbImage& image, const BitMask& mask, Rgb fill);

}  // namespace ringscore
