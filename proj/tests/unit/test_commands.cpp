#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringscore/commands.hpp"
#include "ringscore/error.hpp"
#include "ringscore/synth.hpp"

using namespace ringscore;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = RINGSCORE_SCENARIO_DIR;

using Frames = std::vector<std::vector<RgbImage>>;

Frames synthesize_frames(const Scenario& s, GroundTruth* truth = nullptr) {
  Frames frames(s.cameras.size());
  GroundTruth t = synthesize(s, [&](std::size_t c, std::size_t k, const RgbImage& image) {
    if (frames[c].size() <= k) frames[c].resize(k + 1);
    frames[c][k] = image;
  });
  if (truth) *truth = std::move(t);
  return frames;
}

SessionLog score_frames(const Config& config, const Frames& frames) {
  std::vector<RgbImage> initial;
  for (const auto& f : frames) initial.push_back(f.front());
  const Calibration cal = calibrate(config.cameras, initial, config.params, config.rings);
  return score_session(config, cal, config.scoring_mode, frames.front().size(),
                       [&](std::size_t c, std::size_t k) { return frames[c][k]; });
}

Config single_camera_config(std::vector<std::string> players = {"A"}) {
  Config c;
  c.cameras.push_back({"top", "Top", {}, std::nullopt, {default_face().center}});
  c.players = std::move(players);
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ringscore_commands_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("three-shot session") {
  const Scenario s = load_scenario(kScenarios / "session3.json");
  GroundTruth truth;
  const Frames frames = synthesize_frames(s, &truth);
  REQUIRE(frames.at(0).size() == 4);
  REQUIRE(truth.shots.size() == 3);
  CHECK(truth.shots[0].true_score == 10);
  CHECK(truth.shots[1].true_score == 8);
  CHECK(truth.shots[2].true_score == 0);

  for (const ScoringMode mode : {ScoringMode::Masks, ScoringMode::Rectified}) {
    Config config = synth_config(s, frames[0].size());
    config.scoring_mode = mode;
    const SessionLog log = score_frames(config, frames);
    REQUIRE(log.shots.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(log.shots[i].record.final_score == truth.shots[i].true_score);
      CHECK(log.shots[i].record.player == "A");
      CHECK(log.shots[i].record.arrow_index == static_cast<int>(i) + 1);
    }
    CHECK(log.session.total("A") == 18);
    CHECK(truth.totals.at("A") == 18);
  }
}

TEST_CASE("unchanged frames score zero and are flagged") {
  const TargetSpec face = default_face();
  const RgbImage bare = render_clean(std::span(&face, 1), 1280, 960);
  const SessionLog log = score_frames(single_camera_config(), {{bare, bare}});
  REQUIRE(log.shots.size() == 1);
  CHECK(log.shots[0].record.final_score == 0);
  CHECK(log.shots[0].record.flagged);
  CHECK(log.shots[0].cameras.at(0).error == ErrorCode::NoArrowDetected);
}

TEST_CASE("two cameras fuse by maximum") {
  const TargetSpec face = default_face();
  const RgbImage bare = render_clean(std::span(&face, 1), 1280, 960);
  auto shot_at = [&](double r) {
    ShotSpec shot;
    shot.true_tip = face.center + Vec2{r, 0};
    return render_shot(bare, face, shot);
  };
  Config config = single_camera_config({"A", "B"});
  config.cameras.push_back({"side", "Side", {}, std::nullopt, {face.center}});
  // Ring 7 spans radii (120, 160]; ring 9 spans (40, 80].
  const Frames frames{{bare, shot_at(140.5), shot_at(140.5)}, {bare, shot_at(60.5), shot_at(60.5)}};
  const SessionLog log = score_frames(config, frames);
  REQUIRE(log.shots.size() == 2);
  CHECK(log.shots[0].record.camera_scores.at("top") == 7);
  CHECK(log.shots[0].record.camera_scores.at("side") == 9);
  CHECK(log.shots[0].record.final_score == 9);
  CHECK(log.shots[0].record.player == "A");
  CHECK(log.shots[1].record.player == "B");
  CHECK(log.shots[1].record.flagged);
  CHECK(log.session.total("A") == 9);
  CHECK(format_ranking(log.session) == "Rank\tPlayer\tTotal\n1\tA\t9\n2\tB\t0\n");
}

TEST_CASE("bench on the easy two-camera scenario") {
  const Scenario s = load_scenario(kScenarios / "bench16.json");
  const BenchResult r = run_bench(s);
  REQUIRE(r.cameras.size() == 2);
  CHECK(r.overall.total == 16);
  CHECK(r.overall.correct == 16);
  for (const BenchRow& row : r.cameras) CHECK(row.correct == 16);
  for (const std::size_t rings : r.ring_counts) CHECK(rings == 10);

  std::istringstream table(format_bench_table(r));
  std::string line;
  std::getline(table, line);
  CHECK(line == "\tCorrect\tIncorrect\tTotal\tAccuracy");
  std::getline(table, line);
  CHECK(line == "Side camera\t16\t0\t16\t100.00%");
  std::getline(table, line);
  CHECK(line == "Top camera\t16\t0\t16\t100.00%");
  std::getline(table, line);
  CHECK(line == "Overall\t16\t0\t16\t100.00%");
  CHECK_FALSE(std::getline(table, line));

  CHECK(to_json(run_bench(s)).dump() == to_json(r).dump());
}

TEST_CASE("bench row arithmetic") {
  BenchRow row{"x", 45, 50};
  CHECK(row.incorrect() == 5);
  CHECK(row.accuracy() == doctest::Approx(90.0));
  CHECK(BenchRow{}.accuracy() == 0.0);
}

TEST_CASE("synthesized frames carry the planned arrows") {
  Scenario s = load_scenario(kScenarios / "bench16.json");
  s.generate->count = 5;
  GroundTruth truth;
  const Frames frames = synthesize_frames(s, &truth);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].size() == 6);
  CHECK(truth.shots.size() == 5);
  const std::vector<int> values = s.rings.values;
  for (const GroundTruthShot& shot : truth.shots) {
    for (const ScenarioCamera& cam : s.cameras) {
      CHECK(true_score(cam.target, shot.plane_tips.at(cam.id), values) == shot.true_score);
    }
  }
  const Frames again = synthesize_frames(s);
  CHECK(again == frames);
  CHECK(to_json(truth).dump() == [&] {
    GroundTruth t;
    synthesize_frames(s, &t);
    return to_json(t).dump();
  }());
}

TEST_CASE("command entry points") {
  CHECK(exit_code_for(ErrorCode::NoTargetFound) == kExitCalibration);
  CHECK(exit_code_for(ErrorCode::TooFewRings) == kExitCalibration);
  CHECK(exit_code_for(ErrorCode::Config) == kExitUsage);
  CHECK(exit_code_for(ErrorCode::Io) == kExitUsage);

  const fs::path dir = scratch_dir("entry");
  std::ostringstream sink;
  CommandOptions synth{kScenarios / "session3.json", dir / "frames", std::nullopt, std::nullopt, std::nullopt};
  CHECK(cmd_synth(synth, sink) == kExitOk);
  CHECK(fs::exists(dir / "frames" / "top" / "frame_003.ppm"));
  CHECK(fs::exists(dir / "frames" / "ground_truth.json"));

  CommandOptions calibrate{dir / "frames" / "config.json", dir / "cal.json", std::nullopt, std::nullopt, std::nullopt};
  CHECK(cmd_calibrate(calibrate, sink) == kExitOk);

  CommandOptions score{dir / "frames" / "config.json", dir / "log.json", ScoringMode::Rectified, std::nullopt,
                       dir / "cal.json"};
  std::ostringstream ranking;
  CHECK(cmd_score(score, ranking) == kExitOk);
  CHECK(ranking.str() == "Rank\tPlayer\tTotal\n1\tA\t18\n");
  const std::string first = slurp(dir / "log.json");
  CHECK(cmd_score(score, ranking) == kExitOk);
  CHECK(slurp(dir / "log.json") == first);

  CommandOptions no_out{kScenarios / "session3.json", std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  try {
    cmd_synth(no_out, sink);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
  fs::remove_all(dir);
}
