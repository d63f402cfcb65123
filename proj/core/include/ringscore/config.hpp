#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringscore/arrow.hpp"
#include "ringscore/synth.hpp"
#include "ringscore/target.hpp"

namespace ringscore {

/// Version written to and required from every JSON document.
inline constexpr int kSchemaVersion = 1;

enum class ScoringMode { Masks, Rectified };

std::string to_string(ScoringMode mode);
ScoringMode parse_scoring_mode(std::string_view text);

/// Tunable pipeline parameters as they appear in the config file.
struct PipelineParams {
  int diff_threshold = 40;
  double canny_low = 50.0;
  double canny_high = 150.0;
  double canny_sigma = 1.4;
  double bilateral_sigma_space = 3.0;
  double bilateral_sigma_range = 25.0;
  double center_gate = 100.0;
  double mask_expand = 50.0;
  int arrow_se_height = 15;  ///< at 960 rows; scaled with image height
  double ambiguity_ratio = 0.10;
  double min_ring_fraction = 0.05;
  double ring_merge_tol = 6.0;
  double max_fit_residual = 2.0;

  friend bool operator==(const PipelineParams&, const PipelineParams&) = default;
};

struct RingConfig {
  std::vector<int> values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};  ///< outermost first, strictly increasing
  std::vector<double> radii_ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};  ///< innermost first

  friend bool operator==(const RingConfig&, const RingConfig&) = default;
};

struct CameraConfig {
  std::string id;
  std::string label;
  std::vector<std::string> frames;       ///< explicit frame list, or
  std::optional<std::string> frame_glob;  ///< a pattern expanded in sorted order
  std::vector<Vec2> hints;

  friend bool operator==(const CameraConfig&, const CameraConfig&) = default;
};

struct Config {
  int version = kSchemaVersion;
  std::vector<CameraConfig> cameras;
  std::vector<std::string> players{"player1"};
  PipelineParams params;
  RingConfig rings;
  ScoringMode scoring_mode = ScoringMode::Masks;
  std::optional<std::string> calibration;

  friend bool operator==(const Config&, const Config&) = default;
};

void validate(const PipelineParams& params);
void validate(const RingConfig& rings);
void validate(const Config& config);

DetectionParams detection_params(const PipelineParams& params, const RingConfig& rings);
ArrowParams arrow_params(const PipelineParams& params, int image_height);

nlohmann::json to_json(const PipelineParams& params);
nlohmann::json to_json(const RingConfig& rings);
nlohmann::json to_json(const Config& config);
PipelineParams params_from_json(const nlohmann::json& j);
RingConfig rings_from_json(const nlohmann::json& j);
Config config_from_json(const nlohmann::json& j);

/// Parses and validates a config file. Throws Io or Config.
Config load_config(const std::filesystem::path& path);

/// Frame paths of one camera, resolved against `base_dir`.
std::vector<std::filesystem::path> resolve_frames(const CameraConfig& camera, const std::filesystem::path& base_dir);

struct CameraCalibration {
  std::string id;
  std::vector<TargetModel> targets;

  friend bool operator==(const CameraCalibration&, const CameraCalibration&) = default;
};

struct Calibration {
  int version = kSchemaVersion;
  int width = 0;
  int height = 0;
  double mask_expand = 50.0;
  std::vector<CameraCalibration> cameras;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

nlohmann::json to_json(const Calibration& calibration);
/// Rebuilds target models, including rasterized outer masks.
Calibration calibration_from_json(const nlohmann::json& j);
Calibration load_calibration(const std::filesystem::path& path);

/// Bounded random walk of per-frame brightness offsets.
struct LightingSpec {
  double brightness_offset = 0.0;  ///< offsets stay within [-offset, offset]
  double brightness_step = 5.0;    ///< max change between consecutive frames

  friend bool operator==(const LightingSpec&, const LightingSpec&) = default;
};

struct ScenarioCamera {
  std::string id;
  std::string label;
  TargetSpec target;

  friend bool operator==(const ScenarioCamera&, const ScenarioCamera&) = default;
};

/// One shot. The tip is given relative to the target center in units of
/// the outer radius, so it lands on the same face point in every camera.
struct ShotPlan {
  Vec2 offset;
  std::optional<double> shaft_angle;  ///< unset: pointing away from the center line
  double shaft_length = 60.0;
  double shaft_width = 3.0;
  Rgb shaft_color{40, 190, 60};

  friend bool operator==(const ShotPlan&, const ShotPlan&) = default;
};

struct ShotGenerator {
  int count = 16;
  double min_boundary_margin = 0.0;  ///< plane pixels, checked in every camera
  double max_radius_ratio = 1.0;

  friend bool operator==(const ShotGenerator&, const ShotGenerator&) = default;
};

struct Scenario {
  int version = kSchemaVersion;
  int width = 1280;
  int height = 960;
  std::uint64_t seed = 1;
  std::vector<ScenarioCamera> cameras;
  LightingSpec lighting;
  std::vector<ShotPlan> shots;
  std::optional<ShotGenerator> generate;
  std::vector<std::string> players{"player1"};
  PipelineParams params;
  RingConfig rings;
  ScoringMode scoring_mode = ScoringMode::Masks;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

void validate(const Scenario& scenario);

nlohmann::json to_json(const TargetSpec& spec);
TargetSpec target_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Explicit shots followed by generated ones. Generation is seeded by the
/// scenario seed and rejects tips closer than min_boundary_margin to a ring
/// boundary in any camera.
std::vector<ShotPlan> planned_shots(const Scenario& scenario);

/// Plane-coordinate tip of a shot for one camera's target.
Vec2 shot_tip(const TargetSpec& spec, const ShotPlan& shot);
ShotSpec shot_spec(const TargetSpec& spec, const ShotPlan& shot);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `j.dump(2)` plus a trailing newline. Throws Io.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace ringscore
