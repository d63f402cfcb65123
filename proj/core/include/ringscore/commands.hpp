#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringscore/config.hpp"
#include "ringscore/rectify.hpp"
#include "ringscore/scoring.hpp"

namespace ringscore {

/// Outcome of one camera for one frame transition.
struct CameraShot {
  std::string camera_id;
  int target_index = -1;
  std::optional<Pixel> tip;
  std::optional<int> score;
  std::optional<ErrorCode> error;
  std::string message;
  std::size_t blob_area = 0;
  int diff_peak = 0;
};

/// Calibrated targets of one camera, prepared for a scoring mode.
class CameraScorer {
 public:
  CameraScorer(CameraCalibration calibration, const PipelineParams& params, RingConfig rings, ScoringMode mode,
               int image_height);

  const std::string& id() const noexcept { return calibration_.id; }
  const CameraCalibration& calibration() const noexcept { return calibration_; }

  /// Detects the arrow against every target and keeps the largest blob.
  /// Never throws for per-shot failures; they are reported in the result.
  CameraShot score(const RgbImage& prev, const RgbImage& curr) const;

 private:
  CameraCalibration calibration_;
  ArrowParams arrow_;
  RingConfig rings_;
  ScoringMode mode_;
  std::vector<std::optional<Rectification>> rectifications_;
  std::vector<std::string> rectification_errors_;
};

/// Detects every hinted target in each camera's initial image.
/// Throws the detection error prefixed with the camera and hint.
Calibration calibrate(const std::vector<CameraConfig>& cameras, const std::vector<RgbImage>& initial,
                      const PipelineParams& params, const RingConfig& rings);

struct ShotLog {
  int shot = 0;  ///< 1-based frame transition
  ScoreRecord record;
  std::vector<CameraShot> cameras;
};

struct SessionLog {
  Config config;
  ScoringMode mode = ScoringMode::Masks;
  Calibration calibration;
  std::vector<ShotLog> shots;
  Session session;
};

/// Supplies frame `frame` of camera `camera` (indices into config.cameras).
using FrameSource = std::function<RgbImage(std::size_t camera, std::size_t frame)>;

/// Scores frame transitions 1..frame_count-1 in order, rotating players.
SessionLog score_session(const Config& config, const Calibration& calibration, ScoringMode mode,
                         std::size_t frame_count, const FrameSource& frames);

nlohmann::json to_json(const CameraShot& shot);
nlohmann::json to_json(const SessionLog& log);
std::string format_ranking(const Session& session);

struct BenchTrial {
  int index = 0;
  Vec2 offset;
  Vec2 tip;  ///< plane tip in the first camera
  int true_score = 0;
  double boundary_margin = 0.0;  ///< smallest over cameras, plane pixels
  std::vector<CameraShot> cameras;
  int final_score = 0;
  bool flagged = false;
};

struct BenchRow {
  std::string label;
  int correct = 0;
  int total = 0;
  int incorrect() const noexcept { return total - correct; }
  double accuracy() const noexcept { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

struct BenchResult {
  ScoringMode mode = ScoringMode::Masks;
  std::uint64_t seed = 0;
  std::vector<std::string> camera_ids;
  std::vector<BenchRow> cameras;
  BenchRow overall;
  std::vector<std::size_t> ring_counts;  ///< detected rings per camera
  std::vector<BenchTrial> trials;
};

/// Per-frame brightness offsets: a bounded random walk starting uniformly
/// in [-offset, offset]. Offsets are rounded to integers.
std::vector<int> brightness_walk(const LightingSpec& lighting, std::size_t frames, std::uint64_t seed);

/// Calibrates each camera once on a noisy initial frame, then runs every
/// planned shot as an independent before/after trial.
BenchResult run_bench(const Scenario& scenario);

/// Tab-separated accuracy table: camera rows then "Overall".
std::string format_bench_table(const BenchResult& result);
nlohmann::json to_json(const BenchResult& result);

struct GroundTruthShot {
  int shot = 0;
  std::string player;
  int arrow_index = 0;
  Vec2 offset;
  std::map<std::string, Vec2> plane_tips;
  std::map<std::string, Vec2> image_tips;
  int true_score = 0;
  double boundary_margin = 0.0;
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<GroundTruthShot> shots;
  std::map<std::string, long> totals;
};

/// Calls `sink(camera, frame, image)` for frames 0..N of every camera:
/// frame 0 is the bare face and frame k carries arrows 1..k.
GroundTruth synthesize(const Scenario& scenario,
                       const std::function<void(std::size_t, std::size_t, const RgbImage&)>& sink);

nlohmann::json to_json(const GroundTruth& truth);

/// A config that scores the frames written by cmd_synth in `dir`.
Config synth_config(const Scenario& scenario, std::size_t frame_count);

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<ScoringMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> calibration;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCalibration = 2;

int cmd_calibrate(const CommandOptions& options, std::ostream& out);
int cmd_score(const CommandOptions& options, std::ostream& out);
int cmd_bench(const CommandOptions& options, std::ostream& out);
int cmd_synth(const CommandOptions& options, std::ostream& out);

/// Maps an error code to the process exit status.
int exit_code_for(ErrorCode code);

}  // namespace ringscore
