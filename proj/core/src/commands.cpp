#include "ringscore/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "ringscore/error.hpp"

namespace ringscore {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Seed streams, so that frames, lighting and calibration never share draws.
enum class Stream : std::uint64_t { CalibrationFrame = 1, TrialBefore, TrialAfter, TrialLighting, SynthFrame, SynthLighting };

std::uint64_t seed_for(std::uint64_t base, Stream stream, std::size_t camera, std::size_t index) {
  return derive_seed(derive_seed(derive_seed(base, static_cast<std::uint64_t>(stream)), camera), index);
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

std::string percent(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f%%", value);
  return buffer;
}

RgbImage frame_image(const RgbImage& clean, double sigma, std::uint64_t seed, int brightness) {
  RgbImage out = add_noise(clean, sigma, seed);
  return brightness == 0 ? out : adjust_brightness(out, brightness);
}

}  // namespace

CameraScorer::CameraScorer(CameraCalibration calibration, const PipelineParams& params, RingConfig rings,
                           ScoringMode mode, int image_height)
    : calibration_(std::move(calibration)),
      arrow_(arrow_params(params, image_height)),
      rings_(std::move(rings)),
      mode_(mode) {
  for (const TargetModel& target : calibration_.targets) {
    if (mode_ != ScoringMode::Rectified) {
      rectifications_.emplace_back();
      rectification_errors_.emplace_back();
      continue;
    }
    try {
      rectifications_.emplace_back(perspective_rectification(target));
      rectification_errors_.emplace_back();
    } catch (const Error& e) {
      rectifications_.emplace_back();
      rectification_errors_.emplace_back(e.what());
    }
  }
}

CameraShot CameraScorer::score(const RgbImage& prev, const RgbImage& curr) const {
  CameraShot shot;
  shot.camera_id = calibration_.id;
  std::optional<ArrowDetection> best;
  std::optional<Error> first_error;
  for (std::size_t i = 0; i < calibration_.targets.size(); ++i) {
    try {
      ArrowDetection d = detect_arrow(prev, curr, calibration_.targets[i], arrow_, calibration_.id);
      if (!best || d.blob.area() > best->blob.area()) {
        best = std::move(d);
        shot.target_index = static_cast<int>(i);
      }
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  }
  if (!best) {
    const Error e = first_error ? *first_error : Error(ErrorCode::NoArrowDetected, "no calibrated target");
    shot.error = e.code();
    shot.message = e.what();
    return shot;
  }
  shot.tip = best->tip;
  shot.blob_area = best->blob.area();
  shot.diff_peak = best->diff_peak;

  const std::size_t t = static_cast<std::size_t>(shot.target_index);
  const Vec2 p = pixel_center(best->tip);
  if (mode_ == ScoringMode::Masks) {
    shot.score = score_point(calibration_.targets[t], p);
  } else if (rectifications_[t]) {
    const std::vector<double> radii = radii_from_ratios(*rectifications_[t], rings_.radii_ratios);
    shot.score = score_point_rectified(*rectifications_[t], radii, rings_.values, p);
  } else {
    shot.error = ErrorCode::Degenerate;
    shot.message = "rectification unavailable: " + rectification_errors_[t];
  }
  return shot;
}

Calibration calibrate(const std::vector<CameraConfig>& cameras, const std::vector<RgbImage>& initial,
                      const PipelineParams& params, const RingConfig& rings) {
  if (cameras.size() != initial.size() || cameras.empty()) {
    throw Error(ErrorCode::BadParameter, "need exactly one initial image per camera");
  }
  Calibration cal;
  cal.width = initial.front().width();
  cal.height = initial.front().height();
  cal.mask_expand = params.mask_expand;
  const DetectionParams detection = detection_params(params, rings);
  for (std::size_t c = 0; c < cameras.size(); ++c) {
    if (initial[c].width() != cal.width || initial[c].height() != cal.height) {
      throw Error(ErrorCode::DimensionMismatch, "all cameras must share one frame size");
    }
    CalibrationHint hint{cameras[c].id, cameras[c].hints};
    cal.cameras.push_back({cameras[c].id, detect_all_targets(initial[c], hint, detection)});
  }
  return cal;
}

SessionLog score_session(const Config& config, const Calibration& calibration, ScoringMode mode,
                         std::size_t frame_count, const FrameSource& frames) {
  if (frame_count < 2) throw Error(ErrorCode::Config, "scoring needs at least two frames per camera");
  SessionLog log;
  log.config = config;
  log.mode = mode;
  log.calibration = calibration;
  log.session = Session(config.players);

  std::vector<CameraScorer> scorers;
  for (const CameraConfig& camera : config.cameras) {
    const auto it = std::find_if(calibration.cameras.begin(), calibration.cameras.end(),
                                 [&](const CameraCalibration& c) { return c.id == camera.id; });
    if (it == calibration.cameras.end()) throw Error(ErrorCode::Config, "calibration lacks camera '" + camera.id + "'");
    scorers.emplace_back(*it, config.params, config.rings, mode, calibration.height);
  }

  std::vector<RgbImage> prev;
  for (std::size_t c = 0; c < scorers.size(); ++c) prev.push_back(frames(c, 0));
  for (std::size_t k = 1; k < frame_count; ++k) {
    ShotLog shot;
    shot.shot = static_cast<int>(k);
    std::map<std::string, std::optional<int>> scores;
    for (std::size_t c = 0; c < scorers.size(); ++c) {
      RgbImage curr = frames(c, k);
      CameraShot result = scorers[c].score(prev[c], curr);
      scores[result.camera_id] = result.score;
      shot.cameras.push_back(std::move(result));
      prev[c] = std::move(curr);
    }
    const std::string& player = config.players[(k - 1) % config.players.size()];
    log.session = log.session.record_shot(player, fuse_camera_scores(std::move(scores)));
    shot.record = log.session.records().back();
    log.shots.push_back(std::move(shot));
  }
  return log;
}

json to_json(const CameraShot& shot) {
  json j = {{"camera", shot.camera_id},
            {"status", shot.error ? to_string(*shot.error) : std::string("ok")},
            {"message", shot.message},
            {"blob_area", shot.blob_area},
            {"diff_peak", shot.diff_peak}};
  j["target"] = shot.target_index >= 0 ? json(shot.target_index) : json(nullptr);
  j["tip"] = shot.tip ? json::array({shot.tip->x, shot.tip->y}) : json(nullptr);
  j["score"] = shot.score ? json(*shot.score) : json(nullptr);
  return j;
}

namespace {

json camera_scores_json(const std::map<std::string, std::optional<int>>& scores) {
  json j = json::object();
  for (const auto& [id, score] : scores) j[id] = score ? json(*score) : json(nullptr);
  return j;
}

json calibration_summary(const Calibration& calibration) {
  json cameras = json::array();
  for (const CameraCalibration& c : calibration.cameras) {
    json targets = json::array();
    for (const TargetModel& t : c.targets) targets.push_back({{"center", vec_json(t.center)}, {"ring_count", t.rings.size()}});
    cameras.push_back({{"id", c.id}, {"targets", targets}});
  }
  return cameras;
}

}  // namespace

json to_json(const SessionLog& log) {
  json shots = json::array();
  for (const ShotLog& s : log.shots) {
    json cameras = json::array();
    for (const CameraShot& c : s.cameras) cameras.push_back(to_json(c));
    shots.push_back({{"shot", s.shot},
                     {"player", s.record.player},
                     {"arrow_index", s.record.arrow_index},
                     {"camera_scores", camera_scores_json(s.record.camera_scores)},
                     {"final_score", s.record.final_score},
                     {"flagged", s.record.flagged},
                     {"cameras", cameras}});
  }
  json totals = json::object();
  for (const std::string& p : log.session.players()) totals[p] = log.session.total(p);
  json ranked = json::array();
  for (const auto& [player, total] : ranking(log.session)) ranked.push_back({{"player", player}, {"total", total}});
  return {{"version", kSchemaVersion},
          {"scoring_mode", to_string(log.mode)},
          {"config", to_json(log.config)},
          {"calibration", calibration_summary(log.calibration)},
          {"shots", shots},
          {"totals", totals},
          {"ranking", ranked}};
}

std::string format_ranking(const Session& session) {
  std::ostringstream out;
  out << "Rank\tPlayer\tTotal\n";
  int rank = 0;
  for (const auto& [player, total] : ranking(session)) out << ++rank << '\t' << player << '\t' << total << '\n';
  return out.str();
}

std::vector<int> brightness_walk(const LightingSpec& lighting, std::size_t frames, std::uint64_t seed) {
  std::vector<int> out;
  out.reserve(frames);
  const double bound = lighting.brightness_offset;
  std::mt19937_64 rng(seed);
  double offset = bound * (2.0 * unit_uniform(rng) - 1.0);
  for (std::size_t i = 0; i < frames; ++i) {
    if (i > 0) offset = std::clamp(offset + lighting.brightness_step * (2.0 * unit_uniform(rng) - 1.0), -bound, bound);
    out.push_back(static_cast<int>(std::lround(offset)));
  }
  return out;
}

namespace {

std::vector<CameraScorer> calibrate_scenario(const Scenario& s, const std::vector<RgbImage>& clean, ScoringMode mode) {
  std::vector<CameraConfig> cameras;
  std::vector<RgbImage> initial;
  for (std::size_t c = 0; c < s.cameras.size(); ++c) {
    cameras.push_back({s.cameras[c].id, s.cameras[c].label, {}, std::nullopt, {s.cameras[c].target.center}});
    initial.push_back(
        frame_image(clean[c], s.cameras[c].target.noise_sigma, seed_for(s.seed, Stream::CalibrationFrame, c, 0), 0));
  }
  const Calibration cal = calibrate(cameras, initial, s.params, s.rings);
  std::vector<CameraScorer> scorers;
  for (const CameraCalibration& c : cal.cameras) scorers.emplace_back(c, s.params, s.rings, mode, s.height);
  return scorers;
}

std::vector<RgbImage> clean_faces(const Scenario& s) {
  std::vector<RgbImage> out;
  for (const ScenarioCamera& c : s.cameras) out.push_back(render_clean(std::span(&c.target, 1), s.width, s.height));
  return out;
}

double min_margin(const Scenario& s, const ShotPlan& shot) {
  double margin = std::numeric_limits<double>::infinity();
  for (const ScenarioCamera& c : s.cameras) margin = std::min(margin, boundary_margin(c.target, shot_tip(c.target, shot)));
  return margin;
}

}  // namespace

BenchResult run_bench(const Scenario& s) {
  validate(s);
  BenchResult result;
  result.mode = s.scoring_mode;
  result.seed = s.seed;
  const std::vector<RgbImage> clean = clean_faces(s);
  const std::vector<CameraScorer> scorers = calibrate_scenario(s, clean, s.scoring_mode);
  for (std::size_t c = 0; c < s.cameras.size(); ++c) {
    result.camera_ids.push_back(s.cameras[c].id);
    result.cameras.push_back({s.cameras[c].label, 0, 0});
    std::size_t rings = 0;
    for (const TargetModel& t : scorers[c].calibration().targets) rings += t.rings.size();
    result.ring_counts.push_back(rings);
  }
  result.overall.label = "Overall";

  const std::vector<ShotPlan> shots = planned_shots(s);
  for (std::size_t t = 0; t < shots.size(); ++t) {
    BenchTrial trial;
    trial.index = static_cast<int>(t) + 1;
    trial.offset = shots[t].offset;
    const TargetSpec& reference = s.cameras.front().target;
    trial.tip = shot_tip(reference, shots[t]);
    trial.true_score = true_score(reference, trial.tip, s.rings.values);
    trial.boundary_margin = min_margin(s, shots[t]);
    std::map<std::string, std::optional<int>> scores;
    for (std::size_t c = 0; c < s.cameras.size(); ++c) {
      const TargetSpec& spec = s.cameras[c].target;
      const std::vector<int> light = brightness_walk(s.lighting, 2, seed_for(s.seed, Stream::TrialLighting, c, t));
      const RgbImage before = frame_image(clean[c], spec.noise_sigma, seed_for(s.seed, Stream::TrialBefore, c, t), light[0]);
      const RgbImage after = frame_image(render_shot(clean[c], spec, shot_spec(spec, shots[t])), spec.noise_sigma,
                                         seed_for(s.seed, Stream::TrialAfter, c, t), light[1]);
      CameraShot shot = scorers[c].score(before, after);
      ++result.cameras[c].total;
      if (shot.score && *shot.score == trial.true_score) ++result.cameras[c].correct;
      scores[shot.camera_id] = shot.score;
      trial.cameras.push_back(std::move(shot));
    }
    const ShotFragment fused = fuse_camera_scores(std::move(scores));
    trial.final_score = fused.final_score;
    trial.flagged = fused.flagged;
    ++result.overall.total;
    if (!fused.flagged && fused.final_score == trial.true_score) ++result.overall.correct;
    result.trials.push_back(std::move(trial));
  }
  return result;
}

std::string format_bench_table(const BenchResult& result) {
  std::ostringstream out;
  out << "\tCorrect\tIncorrect\tTotal\tAccuracy\n";
  auto row = [&](const BenchRow& r) {
    out << r.label << '\t' << r.correct << '\t' << r.incorrect() << '\t' << r.total << '\t' << percent(r.accuracy())
        << '\n';
  };
  for (const BenchRow& r : result.cameras) row(r);
  row(result.overall);
  return out.str();
}

json to_json(const BenchResult& result) {
  auto row = [](const BenchRow& r) {
    return json{{"label", r.label},
                {"correct", r.correct},
                {"incorrect", r.incorrect()},
                {"total", r.total},
                {"accuracy", percent(r.accuracy())}};
  };
  json rows = json::array();
  for (std::size_t c = 0; c < result.cameras.size(); ++c) {
    json r = row(result.cameras[c]);
    r["camera"] = result.camera_ids[c];
    r["ring_count"] = result.ring_counts[c];
    rows.push_back(std::move(r));
  }
  json trials = json::array();
  for (const BenchTrial& t : result.trials) {
    json cameras = json::array();
    for (const CameraShot& c : t.cameras) cameras.push_back(to_json(c));
    trials.push_back({{"index", t.index},
                      {"offset", vec_json(t.offset)},
                      {"tip", vec_json(t.tip)},
                      {"true_score", t.true_score},
                      {"boundary_margin", t.boundary_margin},
                      {"final_score", t.final_score},
                      {"flagged", t.flagged},
                      {"correct", !t.flagged && t.final_score == t.true_score},
                      {"cameras", cameras}});
  }
  return {{"version", kSchemaVersion},
          {"scoring_mode", to_string(result.mode)},
          {"seed", result.seed},
          {"cameras", rows},
          {"overall", row(result.overall)},
          {"trials", trials}};
}

GroundTruth synthesize(const Scenario& s, const std::function<void(std::size_t, std::size_t, const RgbImage&)>& sink) {
  validate(s);
  GroundTruth truth;
  truth.seed = s.seed;
  const std::vector<ShotPlan> shots = planned_shots(s);
  const std::vector<RgbImage> clean = clean_faces(s);

  std::map<std::string, int> arrows;
  for (std::size_t k = 0; k < shots.size(); ++k) {
    GroundTruthShot g;
    g.shot = static_cast<int>(k) + 1;
    g.player = s.players[k % s.players.size()];
    g.arrow_index = ++arrows[g.player];
    g.offset = shots[k].offset;
    for (const ScenarioCamera& c : s.cameras) {
      const Vec2 tip = shot_tip(c.target, shots[k]);
      g.plane_tips[c.id] = tip;
      g.image_tips[c.id] = apply_transform(plane_to_image(c.target), tip);
    }
    const TargetSpec& reference = s.cameras.front().target;
    g.true_score = true_score(reference, shot_tip(reference, shots[k]), s.rings.values);
    g.boundary_margin = min_margin(s, shots[k]);
    truth.totals[g.player] += g.true_score;
    truth.shots.push_back(std::move(g));
  }
  for (const std::string& p : s.players) truth.totals.try_emplace(p, 0);

  for (std::size_t c = 0; c < s.cameras.size(); ++c) {
    const TargetSpec& spec = s.cameras[c].target;
    const std::vector<int> light =
        brightness_walk(s.lighting, shots.size() + 1, seed_for(s.seed, Stream::SynthLighting, c, 0));
    RgbImage scene = clean[c];
    for (std::size_t k = 0; k <= shots.size(); ++k) {
      if (k > 0) scene = render_shot(scene, spec, shot_spec(spec, shots[k - 1]));
      sink(c, k, frame_image(scene, spec.noise_sigma, seed_for(s.seed, Stream::SynthFrame, c, k), light[k]));
    }
  }
  return truth;
}

json to_json(const GroundTruth& truth) {
  json shots = json::array();
  for (const GroundTruthShot& g : truth.shots) {
    json plane = json::object();
    json image = json::object();
    for (const auto& [id, tip] : g.plane_tips) plane[id] = vec_json(tip);
    for (const auto& [id, tip] : g.image_tips) image[id] = vec_json(tip);
    shots.push_back({{"shot", g.shot},
                     {"player", g.player},
                     {"arrow_index", g.arrow_index},
                     {"offset", vec_json(g.offset)},
                     {"plane_tips", plane},
                     {"image_tips", image},
                     {"true_score", g.true_score},
                     {"boundary_margin", g.boundary_margin}});
  }
  return {{"version", kSchemaVersion}, {"seed", truth.seed}, {"shots", shots}, {"totals", truth.totals}};
}

namespace {

std::string frame_name(std::size_t k) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "frame_%03zu.ppm", k);
  return buffer;
}

}  // namespace

Config synth_config(const Scenario& s, std::size_t frame_count) {
  Config config;
  for (const ScenarioCamera& c : s.cameras) {
    CameraConfig camera{c.id, c.label, {}, std::nullopt, {c.target.center}};
    for (std::size_t k = 0; k < frame_count; ++k) camera.frames.push_back(c.id + "/" + frame_name(k));
    config.cameras.push_back(std::move(camera));
  }
  config.players = s.players;
  config.params = s.params;
  config.rings = s.rings;
  config.scoring_mode = s.scoring_mode;
  return config;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoTargetFound:
    case ErrorCode::TooFewRings:
      return kExitCalibration;
    default:
      return kExitUsage;
  }
}

namespace {

void emit(const CommandOptions& options, const json& j, std::ostream& out) {
  if (options.out) {
    write_json_file(*options.out, j);
  } else {
    out << j.dump(2) << '\n';
  }
}

struct LoadedConfig {
  Config config;
  fs::path base_dir;
  std::vector<std::vector<fs::path>> frames;
};

LoadedConfig load_for_scoring(const CommandOptions& options) {
  LoadedConfig loaded{load_config(options.config), options.config.parent_path(), {}};
  for (const CameraConfig& camera : loaded.config.cameras) {
    loaded.frames.push_back(resolve_frames(camera, loaded.base_dir));
    if (loaded.frames.back().empty()) throw Error(ErrorCode::Config, "camera '" + camera.id + "' has no frames");
  }
  return loaded;
}

Calibration calibrate_from_first_frames(const LoadedConfig& loaded) {
  std::vector<RgbImage> initial;
  for (const auto& frames : loaded.frames) initial.push_back(read_ppm_file(frames.front()));
  return calibrate(loaded.config.cameras, initial, loaded.config.params, loaded.config.rings);
}

void print_ring_counts(const Calibration& calibration, std::ostream& out) {
  for (const CameraCalibration& c : calibration.cameras) {
    for (std::size_t t = 0; t < c.targets.size(); ++t) {
      out << "camera " << c.id << " target " << t + 1 << ": " << c.targets[t].rings.size() << " rings\n";
    }
  }
}

Scenario load_scenario_with_overrides(const CommandOptions& options) {
  Scenario s = load_scenario(options.config);
  if (options.seed) s.seed = *options.seed;
  if (options.mode) s.scoring_mode = *options.mode;
  return s;
}

}  // namespace

int cmd_calibrate(const CommandOptions& options, std::ostream& out) {
  const LoadedConfig loaded = load_for_scoring(options);
  const Calibration calibration = calibrate_from_first_frames(loaded);
  emit(options, to_json(calibration), out);
  if (options.out) print_ring_counts(calibration, out);
  return kExitOk;
}

int cmd_score(const CommandOptions& options, std::ostream& out) {
  const LoadedConfig loaded = load_for_scoring(options);
  const std::size_t count = loaded.frames.front().size();
  for (std::size_t c = 0; c < loaded.frames.size(); ++c) {
    if (loaded.frames[c].size() != count) throw Error(ErrorCode::Config, "cameras have frame sequences of different length");
  }
  if (count < 2) throw Error(ErrorCode::Config, "scoring needs at least two frames per camera");

  std::optional<fs::path> calibration_path = options.calibration;
  if (!calibration_path && loaded.config.calibration) calibration_path = loaded.base_dir / *loaded.config.calibration;
  const Calibration calibration =
      calibration_path ? load_calibration(*calibration_path) : calibrate_from_first_frames(loaded);

  const ScoringMode mode = options.mode.value_or(loaded.config.scoring_mode);
  const SessionLog log = score_session(loaded.config, calibration, mode, count, [&](std::size_t c, std::size_t k) {
    return read_ppm_file(loaded.frames[c][k]);
  });
  emit(options, to_json(log), out);
  if (options.out) out << format_ranking(log.session);
  return kExitOk;
}

int cmd_bench(const CommandOptions& options, std::ostream& out) {
  const BenchResult result = run_bench(load_scenario_with_overrides(options));
  out << format_bench_table(result);
  if (options.out) write_json_file(*options.out, to_json(result));
  return kExitOk;
}

int cmd_synth(const CommandOptions& options, std::ostream& out) {
  if (!options.out) throw Error(ErrorCode::Config, "synth needs --out <directory>");
  const Scenario s = load_scenario_with_overrides(options);
  const fs::path dir = *options.out;
  std::error_code ec;
  for (const ScenarioCamera& c : s.cameras) {
    fs::create_directories(dir / c.id, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + (dir / c.id).string());
  }
  std::size_t frames = 0;
  const GroundTruth truth = synthesize(s, [&](std::size_t c, std::size_t k, const RgbImage& image) {
    write_ppm_file(dir / s.cameras[c].id / frame_name(k), image);
    frames = std::max(frames, k + 1);
  });
  write_json_file(dir / "ground_truth.json", to_json(truth));
  write_json_file(dir / "config.json", to_json(synth_config(s, frames)));
  out << "wrote " << frames << " frames per camera for " << s.cameras.size() << " camera(s) to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace ringscore
