#pragma once

// Brute-force reference implementations shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "ringscore/imgproc.hpp"
#include "ringscore/raster.hpp"

namespace oracle {

using ringscore::BitMask;

inline BitMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution bit(density);
  BitMask m(w, h);
  for (auto& v : m.values()) v = bit(rng) ? 1 : 0;
  return m;
}

/// Union of random rectangles: blobby masks that survive openings.
inline BitMask random_blobs(std::mt19937_64& rng, int w, int h, int count) {
  BitMask m(w, h);
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), len(1, std::max(2, std::min(w, h) / 2));
  for (int i = 0; i < count; ++i) {
    const int x0 = px(rng), y0 = py(rng), bw = len(rng), bh = len(rng);
    for (int y = y0; y < std::min(h, y0 + bh); ++y) {
      for (int x = x0; x < std::min(w, x0 + bw); ++x) m(x, y) = 1;
    }
  }
  return m;
}

inline bool at(const BitMask& m, int x, int y) { return m.contains(x, y) && m(x, y) != 0; }

inline BitMask erode(const BitMask& m, int se_w, int se_h) {
  BitMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -se_h / 2; dy <= se_h / 2 && all; ++dy) {
        for (int dx = -se_w / 2; dx <= se_w / 2 && all; ++dx) all = at(m, x + dx, y + dy);
      }
      out(x, y) = all ? 1 : 0;
    }
  }
  return out;
}

inline BitMask dilate(const BitMask& m, int se_w, int se_h) {
  BitMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -se_h / 2; dy <= se_h / 2 && !any; ++dy) {
        for (int dx = -se_w / 2; dx <= se_w / 2 && !any; ++dx) any = at(m, x + dx, y + dy);
      }
      out(x, y) = any ? 1 : 0;
    }
  }
  return out;
}

/// Component areas via stack flood fill, sorted ascending.
inline std::vector<std::size_t> component_areas(const BitMask& m, bool eight) {
  std::vector<std::uint8_t> seen(m.size(), 0);
  std::vector<std::size_t> areas;
  const int w = m.width();
  for (int y0 = 0; y0 < m.height(); ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!m(x0, y0) || seen[y0 * w + x0]) continue;
      std::size_t area = 0;
      std::vector<std::pair<int, int>> stack{{x0, y0}};
      seen[y0 * w + x0] = 1;
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++area;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
            const int nx = x + dx, ny = y + dy;
            if (at(m, nx, ny) && !seen[ny * w + nx]) {
              seen[ny * w + nx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      areas.push_back(area);
    }
  }
  std::sort(areas.begin(), areas.end());
  return areas;
}

/// Points on an ellipse at uniform parameter steps.
inline std::vector<ringscore::Vec2> ellipse_points(ringscore::Vec2 c, double a, double b, double theta, int n,
                                                   double t0 = 0.0, double span = 2.0 * std::numbers::pi) {
  std::vector<ringscore::Vec2> pts;
  const double ct = std::cos(theta), st = std::sin(theta);
  for (int i = 0; i < n; ++i) {
    const double t = t0 + span * i / n;
    const double u = a * std::cos(t), v = b * std::sin(t);
    pts.push_back({c.x + u * ct - v * st, c.y + u * st + v * ct});
  }
  return pts;
}

/// Difference of two angles folded into [0, pi/2] for axis directions.
inline double axis_angle_error(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

}  // namespace oracle
