#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ringscore/error.hpp"
#include "ringscore/synth.hpp"
#include "ringscore/target.hpp"

using namespace ringscore;

namespace {

const TargetSpec& face() {
  static const TargetSpec spec = default_face();
  return spec;
}

const RgbImage& face_image() {
  static const RgbImage image = render_clean(std::span(&face(), 1), 1280, 960);
  return image;
}

const TargetModel& face_model() {
  static const TargetModel model = detect_target(face_image(), face().center, DetectionParams{});
  return model;
}

double rms_to_circle(const Ellipse& e, Vec2 c, double r) {
  double acc = 0.0;
  const int n = 360;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    const double d = radial_distance(e, {c.x + r * std::cos(t), c.y + r * std::sin(t)});
    acc += d * d;
  }
  return std::sqrt(acc / n);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("detect_target recovers the ten-ring face") {
  const TargetModel& model = face_model();
  REQUIRE(model.rings.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const double radius = face().ring_radii_ratios[9 - i] * face().outer_radius;
    CHECK(model.rings[i].score == static_cast<int>(i) + 1);
    CHECK(rms_to_circle(model.rings[i].boundary, face().center, radius) <= 2.0);
    CHECK(distance(model.rings[i].boundary.center, model.center) <= 100.0);
    if (i > 0) {
      CHECK(model.rings[i].boundary.area() < model.rings[i - 1].boundary.area());
      CHECK(model.rings[i - 1].boundary.semi_major - model.rings[i].boundary.semi_major > 6.0);
    }
  }
  for (const RingModel& ring : model.rings) CHECK(is_subset(ellipse_mask(ring.boundary, 1280, 960), model.outer_mask));
  CHECK(model.outer_boundary.semi_major == doctest::Approx(model.rings[0].boundary.semi_major + 25.0));
}

TEST_CASE("detection is deterministic") {
  CHECK(detect_target(face_image(), face().center, DetectionParams{}) == face_model());
}

TEST_CASE("hint far from every ring center") {
  CHECK(code_of([] { detect_target(face_image(), face().center + Vec2{150, 0}, DetectionParams{}); }) ==
        ErrorCode::NoTargetFound);
  CHECK(code_of([] { detect_target(face_image(), {-5, 10}, DetectionParams{}); }) == ErrorCode::BadParameter);
}

TEST_CASE("noisy face keeps the ring count") {
  TargetSpec spec = default_face();
  spec.noise_sigma = 8.0;
  const TargetModel model = detect_target(render_target(spec, 1280, 960, 5), spec.center, DetectionParams{});
  CHECK(model.rings.size() == 10);
}

TEST_CASE("detect_all_targets") {
  std::vector<TargetSpec> specs{default_face({330, 480}, 280), default_face({950, 480}, 280)};
  const RgbImage image = render_clean(specs, 1280, 960);
  const DetectionParams params;
  const auto models = detect_all_targets(image, {"cam", {specs[0].center, specs[1].center}}, params);
  REQUIRE(models.size() == 2);
  CHECK(models[0].rings.size() == 10);
  CHECK(models[1].rings.size() == 10);
  CHECK(distance(models[0].rings.back().boundary.center, specs[0].center) < 2.0);
  CHECK(distance(models[1].rings.back().boundary.center, specs[1].center) < 2.0);

  const auto reversed = detect_all_targets(image, {"cam", {specs[1].center, specs[0].center}}, params);
  REQUIRE(reversed.size() == 2);
  CHECK(reversed[0] == models[1]);
  CHECK(reversed[1] == models[0]);

  const auto single = detect_all_targets(face_image(), {"cam", {face().center}}, params);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == face_model());
}

TEST_CASE("build_target_model clustering") {
  DetectionParams params;
  params.ring_values = {1, 2, 3};
  const Vec2 c{200, 200};
  SUBCASE("pairs collapse to medians and values run outside in") {
    std::vector<Ellipse> cands = {make_ellipse(c, 99, 99, 0), make_ellipse(c, 101, 101, 0),
                                  make_ellipse(c, 59, 59, 0), make_ellipse(c, 61, 61, 0),
                                  make_ellipse(c, 20, 20, 0), make_ellipse(c + Vec2{150, 0}, 30, 30, 0)};
    const TargetModel m = build_target_model(cands, c, 400, 400, params);
    REQUIRE(m.rings.size() == 3);
    CHECK(m.rings[0].boundary.semi_major == doctest::Approx(100));
    CHECK(m.rings[1].boundary.semi_major == doctest::Approx(60));
    CHECK(m.rings[2].boundary.semi_major == doctest::Approx(20));
    CHECK(m.rings[0].score == 1);
    CHECK(m.rings[2].score == 3);
  }
  SUBCASE("extra rings keep the outermost ones") {
    std::vector<Ellipse> cands;
    for (double r : {100.0, 80.0, 60.0, 40.0}) cands.push_back(make_ellipse(c, r, r, 0));
    const TargetModel m = build_target_model(cands, c, 400, 400, params);
    REQUIRE(m.rings.size() == 3);
    CHECK(m.rings[2].boundary.semi_major == doctest::Approx(60));
  }
  SUBCASE("tiny fragments are dropped") {
    std::vector<Ellipse> cands = {make_ellipse(c, 100, 100, 0), make_ellipse(c, 3, 3, 0)};
    CHECK(build_target_model(cands, c, 400, 400, params).rings.size() == 1);
  }
  SUBCASE("nothing near the hint") {
    std::vector<Ellipse> cands = {make_ellipse(c + Vec2{150, 0}, 50, 50, 0)};
    CHECK(code_of([&] { build_target_model(cands, c, 400, 400, params); }) == ErrorCode::NoTargetFound);
  }
}

TEST_CASE("parameter validation") {
  DetectionParams p;
  p.canny_low = 200;
  CHECK_THROWS_AS(validate(p), Error);
  p = DetectionParams{};
  p.ring_values = {3, 2, 1};
  CHECK_THROWS_AS(validate(p), Error);
}
