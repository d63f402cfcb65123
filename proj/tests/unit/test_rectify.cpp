#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ringscore/error.hpp"
#include "ringscore/rectify.hpp"
#include "ringscore/scoring.hpp"
#include "ringscore/synth.hpp"

using namespace ringscore;

namespace {

Ellipse circle(Vec2 c, double r) { return make_ellipse(c, r, r, 0); }

Ellipse warp_ellipse(const PlanarTransform& t, const Ellipse& e) { return from_conic(transform_conic(t, to_conic(e))); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("apply_transform") {
  const Vec2 p{3.25, -7.5};
  CHECK(apply_transform(PlanarTransform::identity(), p) == p);
  CHECK(apply_transform(PlanarTransform::translation(10, -2), p) == Vec2{13.25, -9.5});

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1), c(-500, 500);
  for (int i = 0; i < 200; ++i) {
    PlanarTransform t;
    t.m << 1 + 0.3 * u(rng), 0.3 * u(rng), 100 * u(rng), 0.3 * u(rng), 1 + 0.3 * u(rng), 100 * u(rng),
        1e-4 * u(rng), 1e-4 * u(rng), 1;
    const Vec2 q{c(rng), c(rng)};
    const Vec2 back = apply_transform(t.inverse(), apply_transform(t, q));
    CHECK(distance(back, q) <= 1e-9 * std::max(1.0, norm(q)));
  }

  PlanarTransform flat;
  flat.m << 1, 0, 0, 0, 1, 0, 1, 0, 0;
  CHECK(code_of([&] { apply_transform(flat, {0, 5}); }) == ErrorCode::AtInfinity);
  CHECK(code_of([] { PlanarTransform::scaling(0, 1).inverse(); }) == ErrorCode::Degenerate);
}

TEST_CASE("transform_conic carries boundary points") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Ellipse e = make_ellipse({300 + 50 * u(rng), 200 + 50 * u(rng)}, 80 + 20 * u(rng), 40 + 10 * u(rng), 1.5 + u(rng));
    PlanarTransform t;
    t.m << 1 + 0.2 * u(rng), 0.2 * u(rng), 30 * u(rng), 0.2 * u(rng), 1 + 0.2 * u(rng), 30 * u(rng), 2e-4 * u(rng),
        2e-4 * u(rng), 1;
    const Ellipse mapped = warp_ellipse(t, e);
    for (const Vec2 p : oracle::ellipse_points(e.center, e.semi_major, e.semi_minor, e.theta, 24)) {
      CHECK(std::abs(ellipse_level(mapped, apply_transform(t, p)) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("ellipse_to_circle") {
  const PlanarTransform id = ellipse_to_circle(circle({40, 50}, 12));
  CHECK((id.m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  const Vec2 q = apply_transform(ellipse_to_circle(make_ellipse({0, 0}, 100, 50, 0)), {0, 50});
  CHECK(std::abs(q.x) < 1e-12);
  CHECK(std::abs(q.y - 100) < 1e-12);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-1000, 1000), b(1, 300), ratio(1, 10), th(0, std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const double minor = b(rng);
    const Ellipse e = make_ellipse({c(rng), c(rng)}, minor * ratio(rng), minor, th(rng));
    const PlanarTransform t = ellipse_to_circle(e);
    for (const Vec2 p : oracle::ellipse_points(e.center, e.semi_major, e.semi_minor, e.theta, 64)) {
      CHECK(std::abs(distance(apply_transform(t, p), e.center) - e.semi_major) <= 1e-9 * e.semi_major);
    }
    const AxisEndpoints ends = axis_endpoints(e);
    CHECK(distance(apply_transform(t, e.center), e.center) <= 1e-9 * e.semi_major);
    CHECK(distance(apply_transform(t, ends.major[0]), ends.major[0]) <= 1e-9 * e.semi_major);
    CHECK(distance(apply_transform(t, ends.major[1]), ends.major[1]) <= 1e-9 * e.semi_major);
  }
}

TEST_CASE("concentric_center and perspective rectification") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> tilt(0.0, 0.5), spin(0, std::numbers::pi);
  for (int i = 0; i < 50; ++i) {
    TargetSpec spec = default_face({640, 480}, 400);
    spec.tilt = tilt(rng);
    const PlanarTransform h =
        PlanarTransform::translation(640, 480) * PlanarTransform::rotation(spin(rng)) *
        PlanarTransform::translation(-640, -480) * plane_to_image(spec);
    const Ellipse outer = warp_ellipse(h, circle(spec.center, 400));
    const Ellipse inner = warp_ellipse(h, circle(spec.center, 40));
    const Vec2 truth = apply_transform(h, spec.center);
    CHECK(distance(concentric_center(outer, inner), truth) < 1e-6);

    const Rectification r = perspective_rectification(outer, truth);
    // Every plane circle about the center lands on a circle, radii in proportion.
    for (const double radius : {40.0, 200.0, 400.0}) {
      for (const Vec2 p : oracle::ellipse_points(spec.center, radius, radius, 0.0, 32)) {
        const double d = distance(apply_transform(r.transform, apply_transform(h, p)), r.center);
        CHECK(std::abs(d - r.outer_radius * radius / 400.0) <= 1e-7 * r.outer_radius);
      }
    }
  }
}

TEST_CASE("score_point_rectified") {
  const Vec2 c{400, 300};
  std::vector<RingModel> rings;
  for (int i = 0; i < 10; ++i) rings.push_back({circle(c, 250.0 - 25.0 * i), i + 1});
  const TargetModel target = assemble_target(c, rings, 50, 800, 600);
  const std::vector<double> ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::vector<int> values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  for (const Rectification& frame : {affine_rectification(target), perspective_rectification(target)}) {
    const std::vector<double> radii = radii_from_ratios(frame, ratios);
    CHECK(score_point_rectified(frame, radii, values, c) == 10);
    CHECK(score_point_rectified(frame, radii, values, c + Vec2{249.5, 0}) == 1);
    CHECK(score_point_rectified(frame, radii, values, c + Vec2{251, 0}) == 0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> px(100, 700), py(20, 580);
    int tested = 0;
    while (tested < 10000) {
      const Vec2 p{px(rng), py(rng)};
      const double d = distance(p, c);
      if (std::abs(d - 25.0 * std::round(d / 25.0)) <= 2.0) continue;
      const int analytic = d > 250.0 ? 0 : std::min(10, 11 - static_cast<int>(std::ceil(d / 25.0)));
      const int rectified = score_point_rectified(frame, radii, values, p);
      CHECK(rectified == score_point(target, p));
      CHECK(rectified == analytic);
      ++tested;
    }
  }
}
