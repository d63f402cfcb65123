#include <doctest.h>

#include <cmath>
#include <random>

#include "ringscore/error.hpp"
#include "ringscore/scoring.hpp"

using namespace ringscore;

namespace {

const Vec2 kCenter{500, 400};

// Concentric circles of radius 30, 60, ..., 300; value 1 outermost.
TargetModel circles() {
  std::vector<RingModel> rings;
  for (int i = 0; i < 10; ++i) rings.push_back({make_ellipse(kCenter, 300.0 - 30.0 * i, 300.0 - 30.0 * i, 0), i + 1});
  return assemble_target(kCenter, rings, 50, 1000, 800);
}

int analytic(Vec2 p) {
  const double d = distance(p, kCenter);
  if (d > 300.0) return 0;
  return std::min(10, 11 - static_cast<int>(std::ceil(d / 30.0)));
}

long folded_total(const Session& s, const std::string& player) {
  long sum = 0;
  for (const ScoreRecord& r : s.records()) {
    if (r.player == player) sum += r.final_score;
  }
  return sum;
}

}  // namespace

TEST_CASE("score_point") {
  const TargetModel t = circles();
  CHECK(score_point(t, kCenter) == 10);
  CHECK(score_point(t, kCenter + Vec2{400, 0}) == 0);
  CHECK(score_point(t, kCenter + Vec2{60, 0}) == 9);
  CHECK(score_point(t, kCenter + Vec2{300, 0}) == 1);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> px(150, 850), py(50, 750);
  int tested = 0;
  while (tested < 10000) {
    const Vec2 p{px(rng), py(rng)};
    const double d = distance(p, kCenter);
    const double off = std::abs(d - 30.0 * std::round(d / 30.0));
    if (off <= 2.0) continue;
    CHECK(score_point(t, p) == analytic(p));
    CHECK(score_point_by_traversal(t, p) == score_point(t, p));
    ++tested;
  }
}

TEST_CASE("innermost containing ring wins for non-nested fits") {
  std::vector<RingModel> rings = {{make_ellipse({100, 100}, 80, 80, 0), 1},
                                  {make_ellipse({150, 100}, 40, 40, 0), 2}};
  const TargetModel t = assemble_target({100, 100}, rings, 10, 300, 300);
  CHECK(score_point(t, {185, 100}) == 2);
  CHECK(score_point(t, {100, 100}) == 1);
}

TEST_CASE("fuse_camera_scores") {
  CHECK(fuse_camera_scores({{"a", 9}, {"b", 7}}).final_score == 9);
  const ShotFragment one = fuse_camera_scores({{"a", std::nullopt}, {"b", 8}});
  CHECK(one.final_score == 8);
  CHECK_FALSE(one.flagged);
  const ShotFragment none = fuse_camera_scores({{"a", std::nullopt}, {"b", std::nullopt}});
  CHECK(none.final_score == 0);
  CHECK(none.flagged);
  CHECK(fuse_camera_scores({{"a", 0}, {"b", 6}}).final_score == 6);
}

TEST_CASE("score_arrow") {
  const TargetModel t = circles();
  ArrowDetection d;
  d.camera_id = "top";
  d.tip = {500, 430};
  CameraOutcome ok{"top", d, std::nullopt, ""};
  CameraOutcome failed{"side", std::nullopt, ErrorCode::NoArrowDetected, "nothing"};
  const ShotFragment f = score_arrow({ok, failed}, {{"top", t}, {"side", t}});
  CHECK(f.camera_scores.at("top") == std::optional<int>(analytic(pixel_center(d.tip))));
  CHECK_FALSE(f.camera_scores.at("side").has_value());
  CHECK(f.final_score == f.camera_scores.at("top"));
}

TEST_CASE("session totals and ranking") {
  Session s({"A", "B"});
  s = s.record_shot("A", fuse_camera_scores({{"c", 10}}));
  CHECK(s.total("A") == 10);
  CHECK(s.records().front().arrow_index == 1);
  CHECK_THROWS_AS(s.record_shot("Z", ShotFragment{}), Error);
  try {
    s.record_shot("Z", ShotFragment{});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPlayer);
  }

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> score(0, 10), who(0, 1);
  for (int i = 0; i < 200; ++i) {
    const std::string p = who(rng) ? "A" : "B";
    s = s.record_shot(p, fuse_camera_scores({{"c", score(rng)}, {"d", score(rng)}}));
  }
  CHECK(s.total("A") == folded_total(s, "A"));
  CHECK(s.total("B") == folded_total(s, "B"));
  int a = 0;
  for (const ScoreRecord& r : s.records()) {
    if (r.player == "A") CHECK(r.arrow_index == ++a);
    for (const auto& [cam, v] : r.camera_scores) {
      if (v) CHECK(r.final_score >= *v);
    }
  }

  const auto ranked = ranking(s);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].second >= ranked[1].second);

  Session tie({"A", "B"});
  tie = tie.record_shot("A", fuse_camera_scores({{"c", 5}})).record_shot("B", fuse_camera_scores({{"c", 5}}));
  CHECK(ranking(tie)[0].first == "A");

  Session order({"A", "B"});
  order = order.record_shot("A", fuse_camera_scores({{"c", 3}})).record_shot("B", fuse_camera_scores({{"c", 9}}));
  CHECK(ranking(order)[0].first == "B");

  CHECK_THROWS_AS(Session({"A", "A"}), Error);
}
