#include "ringscore/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>

namespace ringscore {

namespace {

void require_same_shape(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + std::to_string(w1) + "x" +
                                                  std::to_string(h1) + " vs " + std::to_string(w2) + "x" +
                                                  std::to_string(h2));
  }
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_number(const char* field) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::BadHeader, std::string("missing ") + field);
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) throw Error(ErrorCode::BadHeader, std::string(field) + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::BadHeader, std::string("non-numeric ") + field);
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t count_set(const BitMask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.values().begin(), mask.values().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

BitMask mask_and(const BitMask& a, const BitMask& b) {
  require_same_shape(a.width(), a.height(), b.width(), b.height(), "mask_and");
  BitMask out(a.width(), a.height());
  auto o = out.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (av[i] && bv[i]) ? 1 : 0;
  return out;
}

BitMask mask_not(const BitMask& m) {
  BitMask out(m.width(), m.height());
  auto o = out.values();
  auto mv = m.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = mv[i] ? 0 : 1;
  return out;
}

bool is_subset(const BitMask& inner, const BitMask& outer) {
  require_same_shape(inner.width(), inner.height(), outer.width(), outer.height(), "is_subset");
  auto iv = inner.values();
  auto ov = outer.values();
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i] && !ov[i]) return false;
  }
  return true;
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw Error(ErrorCode::BadParameter, "image dimensions must be >= 1");
  bytes_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < bytes_.size(); i += 3) {
    bytes_[i] = fill.r;
    bytes_[i + 1] = fill.g;
    bytes_[i + 2] = fill.b;
  }
}

RgbImage load_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw Error(ErrorCode::BadMagic, "expected P6");
  HeaderReader header(bytes);
  header.advance(2);
  if (header.at_end() || !(std::isspace(header.peek()) || header.peek() == '#')) {
    throw Error(ErrorCode::BadMagic, "expected whitespace after P6");
  }
  const long width = header.read_number("width");
  const long height = header.read_number("height");
  const long maxval = header.read_number("maxval");
  if (width < 1 || height < 1) throw Error(ErrorCode::BadHeader, "zero image dimension");
  if (maxval != 255) throw Error(ErrorCode::BadHeader, "maxval must be 255, got " + std::to_string(maxval));
  // Exactly one whitespace byte separates the header from the raster.
  if (header.at_end() || !std::isspace(header.peek())) throw Error(ErrorCode::BadHeader, "missing raster separator");
  header.advance(1);

  RgbImage image(static_cast<int>(width), static_cast<int>(height));
  const std::size_t needed = image.bytes().size();
  const std::size_t available = bytes.size() - header.pos();
  if (available < needed) {
    throw Error(ErrorCode::Truncated,
                "expected " + std::to_string(needed) + " data bytes, got " + std::to_string(available));
  }
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(header.pos()), needed, image.bytes().begin());
  return image;
}

std::vector<std::uint8_t> save_ppm(const RgbImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + image.bytes().size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), image.bytes().begin(), image.bytes().end());
  return out;
}

RgbImage read_ppm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ppm(bytes);
}

void write_ppm_file(const std::string& path, const RgbImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  const auto bytes = save_ppm(image);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path);
}

GrayImage to_gray(const RgbImage& image) {
  GrayImage out(image.width(), image.height());
  auto src = image.bytes();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const unsigned r = src[3 * i];
    const unsigned g = src[3 * i + 1];
    const unsigned b = src[3 * i + 2];
    // round-half-up of 0.299R + 0.587G + 0.114B in exact integer arithmetic
    dst[i] = static_cast<std::uint8_t>(std::min(255u, (299 * r + 587 * g + 114 * b + 500) / 1000));
  }
  return out;
}

DiffImage abs_diff_rgb(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a.width(), a.height(), b.width(), b.height(), "abs_diff_rgb");
  DiffImage out(a.width(), a.height());
  auto av = a.bytes();
  auto bv = b.bytes();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::uint16_t sum = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      sum = static_cast<std::uint16_t>(sum + std::abs(int{av[3 * i + c]} - int{bv[3 * i + c]}));
    }
    dst[i] = sum;
  }
  return out;
}

BitMask threshold(const DiffImage& diff, std::uint16_t level) {
  BitMask out(diff.width(), diff.height());
  auto src = diff.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] > level ? 1 : 0;
  return out;
}

RgbImage apply_mask(const RgbImage& image, const BitMask& mask, Rgb fill) {
  require_same_shape(image.width(), image.height(), mask.width(), mask.height(), "apply_mask");
  RgbImage out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!mask(x, y)) out.set(x, y, fill);
    }
  }
  return out;
}

}  // namespace ringscore
