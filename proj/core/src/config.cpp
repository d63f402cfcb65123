#include "ringscore/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "ringscore/error.hpp"

namespace ringscore {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) config_error(where, "expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      config_error(where, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
T convert(const json& value, const std::string& where) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) config_error(where, "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) config_error(where, "expected an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) config_error(where, "expected a string");
    }
    return value.get<T>();
  } catch (const json::exception& e) {
    config_error(where, e.what());
  }
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error(where, std::string("missing '") + key + "'");
  return convert<T>(j.at(key), where + "." + key);
}

template <typename T>
void optional_into(const json& j, const char* key, const std::string& where, T& out) {
  if (j.contains(key)) out = convert<T>(j.at(key), where + "." + key);
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) config_error(where, "expected [x, y]");
  return {convert<double>(j[0], where + "[0]"), convert<double>(j[1], where + "[1]")};
}

json rgb_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

Rgb rgb_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) config_error(where, "expected [r, g, b]");
  std::uint8_t channels[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const int v = convert<int>(j[i], where);
    if (v < 0 || v > 255) config_error(where, "channel outside [0, 255]");
    channels[i] = static_cast<std::uint8_t>(v);
  }
  return {channels[0], channels[1], channels[2]};
}

template <typename T>
std::vector<T> array_from(const json& j, const std::string& where) {
  if (!j.is_array()) config_error(where, "expected an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(convert<T>(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void check_version(const json& j, const std::string& where) {
  const int version = required<int>(j, "version", where);
  if (version != kSchemaVersion) config_error(where, "unsupported version " + std::to_string(version));
}

json ellipse_json(const Ellipse& e) {
  return {{"center", vec_json(e.center)},
          {"semi_major", e.semi_major},
          {"semi_minor", e.semi_minor},
          {"theta", e.theta}};
}

Ellipse ellipse_from(const json& j, const std::string& where) {
  check_keys(j, where, {"center", "semi_major", "semi_minor", "theta", "score"});
  if (!j.contains("center")) config_error(where, "missing 'center'");
  Ellipse e;
  e.center = vec_from(j.at("center"), where + ".center");
  e.semi_major = required<double>(j, "semi_major", where);
  e.semi_minor = required<double>(j, "semi_minor", where);
  e.theta = required<double>(j, "theta", where);
  if (!(e.semi_minor > 0.0) || e.semi_minor > e.semi_major) config_error(where, "invalid ellipse axes");
  return e;
}

}  // namespace

std::string to_string(ScoringMode mode) { return mode == ScoringMode::Masks ? "masks" : "rectified"; }

ScoringMode parse_scoring_mode(std::string_view text) {
  if (text == "masks") return ScoringMode::Masks;
  if (text == "rectified") return ScoringMode::Rectified;
  throw Error(ErrorCode::Config, "scoring mode must be 'masks' or 'rectified', got '" + std::string(text) + "'");
}

void validate(const PipelineParams& p) {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::Config, std::string("params: ") + what);
  };
  check(p.diff_threshold >= 0 && p.diff_threshold <= 765, "diff_threshold must be in [0, 765]");
  check(p.canny_low >= 0.0 && p.canny_low <= p.canny_high, "need 0 <= canny_low <= canny_high");
  check(p.canny_sigma > 0.0, "canny_sigma must be positive");
  check(p.bilateral_sigma_space > 0.0 && p.bilateral_sigma_range > 0.0, "bilateral sigmas must be positive");
  check(p.center_gate >= 0.0, "center_gate must be >= 0");
  check(p.mask_expand >= 0.0, "mask_expand must be >= 0");
  check(p.arrow_se_height >= 1, "arrow_se_height must be >= 1");
  check(p.ambiguity_ratio >= 0.0 && p.ambiguity_ratio < 1.0, "ambiguity_ratio must be in [0, 1)");
  check(p.min_ring_fraction >= 0.0 && p.min_ring_fraction < 1.0, "min_ring_fraction must be in [0, 1)");
  check(p.ring_merge_tol >= 0.0, "ring_merge_tol must be >= 0");
  check(p.max_fit_residual > 0.0, "max_fit_residual must be positive");
}

void validate(const RingConfig& rings) {
  if (rings.values.empty()) throw Error(ErrorCode::Config, "rings: values must not be empty");
  if (!std::is_sorted(rings.values.begin(), rings.values.end(), std::less_equal<>{})) {
    throw Error(ErrorCode::Config, "rings: values must be strictly increasing");
  }
  if (rings.radii_ratios.size() != rings.values.size()) {
    throw Error(ErrorCode::Config, "rings: radii_ratios and values differ in length");
  }
  double last = 0.0;
  for (const double r : rings.radii_ratios) {
    if (!(r > last)) throw Error(ErrorCode::Config, "rings: radii_ratios must be positive and strictly increasing");
    last = r;
  }
  if (last != 1.0) throw Error(ErrorCode::Config, "rings: the outermost radii ratio must be 1.0");
}

void validate(const Config& config) {
  if (config.version != kSchemaVersion) throw Error(ErrorCode::Config, "unsupported config version");
  if (config.cameras.empty()) throw Error(ErrorCode::Config, "at least one camera is required");
  std::set<std::string> ids;
  for (const CameraConfig& camera : config.cameras) {
    if (camera.id.empty()) throw Error(ErrorCode::Config, "camera id must not be empty");
    if (!ids.insert(camera.id).second) throw Error(ErrorCode::Config, "duplicate camera id '" + camera.id + "'");
    if (camera.hints.empty()) throw Error(ErrorCode::Config, "camera '" + camera.id + "' has no target hints");
    if (camera.frame_glob && !camera.frames.empty()) {
      throw Error(ErrorCode::Config, "camera '" + camera.id + "': give frames as a list or a glob, not both");
    }
  }
  if (config.players.empty()) throw Error(ErrorCode::Config, "at least one player is required");
  std::set<std::string> names;
  for (const std::string& player : config.players) {
    if (player.empty() || !names.insert(player).second) {
      throw Error(ErrorCode::Config, "player names must be unique and non-empty");
    }
  }
  validate(config.params);
  validate(config.rings);
}

DetectionParams detection_params(const PipelineParams& p, const RingConfig& rings) {
  DetectionParams d;
  d.bilateral_sigma_space = p.bilateral_sigma_space;
  d.bilateral_sigma_range = p.bilateral_sigma_range;
  d.canny_low = p.canny_low;
  d.canny_high = p.canny_high;
  d.canny_sigma = p.canny_sigma;
  d.center_gate = p.center_gate;
  d.mask_expand = p.mask_expand;
  d.min_ring_fraction = p.min_ring_fraction;
  d.ring_merge_tol = p.ring_merge_tol;
  d.max_fit_residual = p.max_fit_residual;
  d.ring_values = rings.values;
  return d;
}

ArrowParams arrow_params(const PipelineParams& p, int image_height) {
  ArrowParams a;
  a.diff_threshold = static_cast<std::uint16_t>(p.diff_threshold);
  a.se_height = scaled_se_height(image_height, p.arrow_se_height);
  a.ambiguity_ratio = p.ambiguity_ratio;
  return a;
}

json to_json(const PipelineParams& p) {
  return {{"diff_threshold", p.diff_threshold},
          {"canny_low", p.canny_low},
          {"canny_high", p.canny_high},
          {"canny_sigma", p.canny_sigma},
          {"bilateral_sigma_space", p.bilateral_sigma_space},
          {"bilateral_sigma_range", p.bilateral_sigma_range},
          {"center_gate", p.center_gate},
          {"mask_expand", p.mask_expand},
          {"arrow_se_height", p.arrow_se_height},
          {"ambiguity_ratio", p.ambiguity_ratio},
          {"min_ring_fraction", p.min_ring_fraction},
          {"ring_merge_tol", p.ring_merge_tol},
          {"max_fit_residual", p.max_fit_residual}};
}

PipelineParams params_from_json(const json& j) {
  const std::string where = "params";
  check_keys(j, where,
             {"diff_threshold", "canny_low", "canny_high", "canny_sigma", "bilateral_sigma_space",
              "bilateral_sigma_range", "center_gate", "mask_expand", "arrow_se_height", "ambiguity_ratio",
              "min_ring_fraction", "ring_merge_tol", "max_fit_residual"});
  PipelineParams p;
  optional_into(j, "diff_threshold", where, p.diff_threshold);
  optional_into(j, "canny_low", where, p.canny_low);
  optional_into(j, "canny_high", where, p.canny_high);
  optional_into(j, "canny_sigma", where, p.canny_sigma);
  optional_into(j, "bilateral_sigma_space", where, p.bilateral_sigma_space);
  optional_into(j, "bilateral_sigma_range", where, p.bilateral_sigma_range);
  optional_into(j, "center_gate", where, p.center_gate);
  optional_into(j, "mask_expand", where, p.mask_expand);
  optional_into(j, "arrow_se_height", where, p.arrow_se_height);
  optional_into(j, "ambiguity_ratio", where, p.ambiguity_ratio);
  optional_into(j, "min_ring_fraction", where, p.min_ring_fraction);
  optional_into(j, "ring_merge_tol", where, p.ring_merge_tol);
  optional_into(j, "max_fit_residual", where, p.max_fit_residual);
  validate(p);
  return p;
}

json to_json(const RingConfig& rings) { return {{"values", rings.values}, {"radii_ratios", rings.radii_ratios}}; }

RingConfig rings_from_json(const json& j) {
  check_keys(j, "rings", {"values", "radii_ratios"});
  RingConfig rings;
  if (j.contains("values")) rings.values = array_from<int>(j.at("values"), "rings.values");
  if (j.contains("radii_ratios")) {
    rings.radii_ratios = array_from<double>(j.at("radii_ratios"), "rings.radii_ratios");
  } else if (rings.values.size() != rings.radii_ratios.size()) {
    rings.radii_ratios.clear();
    const double n = static_cast<double>(rings.values.size());
    for (std::size_t i = 1; i <= rings.values.size(); ++i) rings.radii_ratios.push_back(static_cast<double>(i) / n);
  }
  validate(rings);
  return rings;
}

json to_json(const Config& config) {
  json cameras = json::array();
  for (const CameraConfig& c : config.cameras) {
    json hints = json::array();
    for (const Vec2 h : c.hints) hints.push_back(vec_json(h));
    json camera = {{"id", c.id}, {"label", c.label}, {"hints", hints}};
    if (c.frame_glob) {
      camera["frames"] = *c.frame_glob;
    } else {
      camera["frames"] = c.frames;
    }
    cameras.push_back(std::move(camera));
  }
  json j = {{"version", config.version},
            {"cameras", cameras},
            {"players", config.players},
            {"params", to_json(config.params)},
            {"rings", to_json(config.rings)},
            {"scoring_mode", to_string(config.scoring_mode)}};
  if (config.calibration) j["calibration"] = *config.calibration;
  return j;
}

Config config_from_json(const json& j) {
  const std::string where = "config";
  check_keys(j, where, {"version", "cameras", "players", "params", "rings", "scoring_mode", "calibration"});
  check_version(j, where);
  Config config;
  if (!j.contains("cameras") || !j.at("cameras").is_array()) config_error(where, "'cameras' must be an array");
  for (std::size_t i = 0; i < j.at("cameras").size(); ++i) {
    const json& cj = j.at("cameras")[i];
    const std::string cw = "cameras[" + std::to_string(i) + "]";
    check_keys(cj, cw, {"id", "label", "frames", "hints"});
    CameraConfig camera;
    camera.id = required<std::string>(cj, "id", cw);
    camera.label = camera.id;
    optional_into(cj, "label", cw, camera.label);
    if (cj.contains("frames")) {
      const json& frames = cj.at("frames");
      if (frames.is_string()) {
        camera.frame_glob = frames.get<std::string>();
      } else {
        camera.frames = array_from<std::string>(frames, cw + ".frames");
      }
    }
    if (!cj.contains("hints") || !cj.at("hints").is_array()) config_error(cw, "'hints' must be an array of [x, y]");
    for (std::size_t h = 0; h < cj.at("hints").size(); ++h) {
      camera.hints.push_back(vec_from(cj.at("hints")[h], cw + ".hints[" + std::to_string(h) + "]"));
    }
    config.cameras.push_back(std::move(camera));
  }
  if (j.contains("players")) config.players = array_from<std::string>(j.at("players"), "players");
  if (j.contains("params")) config.params = params_from_json(j.at("params"));
  if (j.contains("rings")) config.rings = rings_from_json(j.at("rings"));
  if (j.contains("scoring_mode")) {
    config.scoring_mode = parse_scoring_mode(convert<std::string>(j.at("scoring_mode"), "scoring_mode"));
  }
  if (j.contains("calibration")) config.calibration = convert<std::string>(j.at("calibration"), "calibration");
  validate(config);
  return config;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

Config load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

namespace {

// Shell-style match supporting '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view name) {
  std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

std::vector<std::filesystem::path> resolve_frames(const CameraConfig& camera, const std::filesystem::path& base_dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  if (!camera.frame_glob) {
    for (const std::string& f : camera.frames) out.push_back(fs::path(f).is_absolute() ? fs::path(f) : base_dir / f);
    return out;
  }
  const fs::path pattern = fs::path(*camera.frame_glob).is_absolute() ? fs::path(*camera.frame_glob)
                                                                       : base_dir / *camera.frame_glob;
  const fs::path dir = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
  const std::string name_pattern = pattern.filename().string();
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && glob_match(name_pattern, it->path().filename().string())) out.push_back(it->path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

json to_json(const Calibration& calibration) {
  json cameras = json::array();
  for (const CameraCalibration& c : calibration.cameras) {
    json targets = json::array();
    for (const TargetModel& t : c.targets) {
      json rings = json::array();
      for (const RingModel& r : t.rings) {
        json ring = ellipse_json(r.boundary);
        ring["score"] = r.score;
        rings.push_back(std::move(ring));
      }
      targets.push_back({{"center", vec_json(t.center)}, {"ring_count", t.rings.size()}, {"rings", rings}});
    }
    cameras.push_back({{"id", c.id}, {"targets", targets}});
  }
  return {{"version", calibration.version},
          {"width", calibration.width},
          {"height", calibration.height},
          {"mask_expand", calibration.mask_expand},
          {"cameras", cameras}};
}

Calibration calibration_from_json(const json& j) {
  const std::string where = "calibration";
  check_keys(j, where, {"version", "width", "height", "mask_expand", "cameras"});
  check_version(j, where);
  Calibration cal;
  cal.width = required<int>(j, "width", where);
  cal.height = required<int>(j, "height", where);
  cal.mask_expand = required<double>(j, "mask_expand", where);
  if (cal.width < 1 || cal.height < 1 || cal.mask_expand < 0.0) config_error(where, "invalid frame size or mask_expand");
  if (!j.contains("cameras") || !j.at("cameras").is_array()) config_error(where, "'cameras' must be an array");
  for (std::size_t i = 0; i < j.at("cameras").size(); ++i) {
    const json& cj = j.at("cameras")[i];
    const std::string cw = where + ".cameras[" + std::to_string(i) + "]";
    check_keys(cj, cw, {"id", "targets"});
    CameraCalibration camera;
    camera.id = required<std::string>(cj, "id", cw);
    if (!cj.contains("targets") || !cj.at("targets").is_array()) config_error(cw, "'targets' must be an array");
    for (std::size_t t = 0; t < cj.at("targets").size(); ++t) {
      const json& tj = cj.at("targets")[t];
      const std::string tw = cw + ".targets[" + std::to_string(t) + "]";
      check_keys(tj, tw, {"center", "ring_count", "rings"});
      if (!tj.contains("center")) config_error(tw, "missing 'center'");
      const Vec2 center = vec_from(tj.at("center"), tw + ".center");
      if (!tj.contains("rings") || !tj.at("rings").is_array() || tj.at("rings").empty()) {
        config_error(tw, "'rings' must be a non-empty array");
      }
      std::vector<RingModel> rings;
      for (std::size_t r = 0; r < tj.at("rings").size(); ++r) {
        const json& rj = tj.at("rings")[r];
        const std::string rw = tw + ".rings[" + std::to_string(r) + "]";
        rings.push_back({ellipse_from(rj, rw), required<int>(rj, "score", rw)});
      }
      for (std::size_t r = 1; r < rings.size(); ++r) {
        if (!(rings[r].boundary.area() < rings[r - 1].boundary.area())) config_error(tw, "rings must shrink outermost first");
      }
      camera.targets.push_back(assemble_target(center, std::move(rings), cal.mask_expand, cal.width, cal.height));
    }
    cal.cameras.push_back(std::move(camera));
  }
  return cal;
}

Calibration load_calibration(const std::filesystem::path& path) {
  return calibration_from_json(read_json_file(path));
}

json to_json(const TargetSpec& spec) {
  json colors = json::array();
  for (const Rgb c : spec.ring_colors) colors.push_back(rgb_json(c));
  return {{"center", vec_json(spec.center)},
          {"outer_radius", spec.outer_radius},
          {"ring_radii_ratios", spec.ring_radii_ratios},
          {"ring_colors", colors},
          {"background", rgb_json(spec.background)},
          {"tilt", spec.tilt},
          {"noise_sigma", spec.noise_sigma},
          {"line_width", spec.line_width},
          {"view_distance", spec.view_distance}};
}

TargetSpec target_spec_from_json(const json& j) {
  const std::string where = "target";
  check_keys(j, where,
             {"center", "outer_radius", "ring_radii_ratios", "ring_colors", "background", "tilt", "noise_sigma",
              "line_width", "view_distance"});
  TargetSpec spec = default_face();
  if (j.contains("center")) spec.center = vec_from(j.at("center"), where + ".center");
  optional_into(j, "outer_radius", where, spec.outer_radius);
  if (j.contains("ring_radii_ratios")) {
    spec.ring_radii_ratios = array_from<double>(j.at("ring_radii_ratios"), where + ".ring_radii_ratios");
  }
  if (j.contains("ring_colors")) {
    spec.ring_colors.clear();
    const json& colors = j.at("ring_colors");
    if (!colors.is_array()) config_error(where, "'ring_colors' must be an array");
    for (const json& c : colors) spec.ring_colors.push_back(rgb_from(c, where + ".ring_colors"));
  }
  if (j.contains("background")) spec.background = rgb_from(j.at("background"), where + ".background");
  optional_into(j, "tilt", where, spec.tilt);
  optional_into(j, "noise_sigma", where, spec.noise_sigma);
  optional_into(j, "line_width", where, spec.line_width);
  optional_into(j, "view_distance", where, spec.view_distance);
  try {
    validate(spec);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
  return spec;
}

void validate(const Scenario& s) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Config, "scenario: " + what); };
  if (s.version != kSchemaVersion) fail("unsupported version");
  if (s.width < 1 || s.height < 1) fail("frame size must be positive");
  if (s.cameras.empty()) fail("at least one camera is required");
  std::set<std::string> ids;
  for (const ScenarioCamera& c : s.cameras) {
    if (c.id.empty() || !ids.insert(c.id).second) fail("camera ids must be unique and non-empty");
    if (c.target.ring_radii_ratios != s.cameras.front().target.ring_radii_ratios) {
      fail("all cameras must show the same face layout");
    }
    if (c.target.ring_radii_ratios.size() != s.rings.values.size()) fail("ring values do not match the face");
  }
  if (!(s.lighting.brightness_offset >= 0.0 && s.lighting.brightness_step >= 0.0)) fail("lighting must be >= 0");
  if (s.generate) {
    if (s.generate->count < 0) fail("generate.count must be >= 0");
    if (!(s.generate->min_boundary_margin >= 0.0)) fail("generate.min_boundary_margin must be >= 0");
    if (!(s.generate->max_radius_ratio > 0.0)) fail("generate.max_radius_ratio must be positive");
  }
  for (const ShotPlan& shot : s.shots) {
    if (!(shot.shaft_length >= 1.0 && shot.shaft_width >= 1.0)) fail("shaft length and width must be >= 1");
  }
  if (s.players.empty()) fail("at least one player is required");
  std::set<std::string> names;
  for (const std::string& p : s.players) {
    if (p.empty() || !names.insert(p).second) fail("player names must be unique and non-empty");
  }
  validate(s.params);
  validate(s.rings);
}

json to_json(const Scenario& s) {
  json cameras = json::array();
  for (const ScenarioCamera& c : s.cameras) cameras.push_back({{"id", c.id}, {"label", c.label}, {"target", to_json(c.target)}});
  json shots = json::array();
  for (const ShotPlan& p : s.shots) {
    json shot = {{"offset", vec_json(p.offset)},
                 {"shaft_length", p.shaft_length},
                 {"shaft_width", p.shaft_width},
                 {"shaft_color", rgb_json(p.shaft_color)}};
    if (p.shaft_angle) shot["shaft_angle"] = *p.shaft_angle;
    shots.push_back(std::move(shot));
  }
  json j = {{"version", s.version},
            {"width", s.width},
            {"height", s.height},
            {"seed", s.seed},
            {"cameras", cameras},
            {"lighting",
             {{"brightness_offset", s.lighting.brightness_offset}, {"brightness_step", s.lighting.brightness_step}}},
            {"shots", shots},
            {"players", s.players},
            {"params", to_json(s.params)},
            {"rings", to_json(s.rings)},
            {"scoring_mode", to_string(s.scoring_mode)}};
  if (s.generate) {
    j["generate"] = {{"count", s.generate->count},
                     {"min_boundary_margin", s.generate->min_boundary_margin},
                     {"max_radius_ratio", s.generate->max_radius_ratio}};
  }
  return j;
}

Scenario scenario_from_json(const json& j) {
  const std::string where = "scenario";
  check_keys(j, where,
             {"version", "width", "height", "seed", "cameras", "lighting", "shots", "generate", "players", "params",
              "rings", "scoring_mode"});
  check_version(j, where);
  Scenario s;
  optional_into(j, "width", where, s.width);
  optional_into(j, "height", where, s.height);
  optional_into(j, "seed", where, s.seed);
  if (!j.contains("cameras") || !j.at("cameras").is_array()) config_error(where, "'cameras' must be an array");
  for (std::size_t i = 0; i < j.at("cameras").size(); ++i) {
    const json& cj = j.at("cameras")[i];
    const std::string cw = where + ".cameras[" + std::to_string(i) + "]";
    check_keys(cj, cw, {"id", "label", "target"});
    ScenarioCamera camera;
    camera.id = required<std::string>(cj, "id", cw);
    camera.label = camera.id;
    optional_into(cj, "label", cw, camera.label);
    camera.target = cj.contains("target") ? target_spec_from_json(cj.at("target")) : default_face();
    s.cameras.push_back(std::move(camera));
  }
  if (j.contains("lighting")) {
    const json& lj = j.at("lighting");
    check_keys(lj, where + ".lighting", {"brightness_offset", "brightness_step"});
    optional_into(lj, "brightness_offset", where + ".lighting", s.lighting.brightness_offset);
    s.lighting.brightness_step = s.lighting.brightness_offset / 2.0;
    optional_into(lj, "brightness_step", where + ".lighting", s.lighting.brightness_step);
  }
  if (j.contains("shots")) {
    const json& sj = j.at("shots");
    if (!sj.is_array()) config_error(where, "'shots' must be an array");
    for (std::size_t i = 0; i < sj.size(); ++i) {
      const std::string sw = where + ".shots[" + std::to_string(i) + "]";
      check_keys(sj[i], sw, {"offset", "shaft_angle", "shaft_length", "shaft_width", "shaft_color"});
      ShotPlan shot;
      if (!sj[i].contains("offset")) config_error(sw, "missing 'offset'");
      shot.offset = vec_from(sj[i].at("offset"), sw + ".offset");
      if (sj[i].contains("shaft_angle")) shot.shaft_angle = convert<double>(sj[i].at("shaft_angle"), sw + ".shaft_angle");
      optional_into(sj[i], "shaft_length", sw, shot.shaft_length);
      optional_into(sj[i], "shaft_width", sw, shot.shaft_width);
      if (sj[i].contains("shaft_color")) shot.shaft_color = rgb_from(sj[i].at("shaft_color"), sw + ".shaft_color");
      s.shots.push_back(shot);
    }
  }
  if (j.contains("generate")) {
    const json& gj = j.at("generate");
    const std::string gw = where + ".generate";
    check_keys(gj, gw, {"count", "min_boundary_margin", "max_radius_ratio"});
    ShotGenerator g;
    optional_into(gj, "count", gw, g.count);
    optional_into(gj, "min_boundary_margin", gw, g.min_boundary_margin);
    optional_into(gj, "max_radius_ratio", gw, g.max_radius_ratio);
    s.generate = g;
  }
  if (j.contains("players")) s.players = array_from<std::string>(j.at("players"), where + ".players");
  if (j.contains("params")) s.params = params_from_json(j.at("params"));
  if (j.contains("rings")) {
    s.rings = rings_from_json(j.at("rings"));
  } else if (!s.cameras.empty()) {
    // Default values follow the face: 1 for the outermost ring upward.
    const std::size_t n = s.cameras.front().target.ring_radii_ratios.size();
    s.rings.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.rings.values[i] = static_cast<int>(i) + 1;
    s.rings.radii_ratios = s.cameras.front().target.ring_radii_ratios;
  }
  if (j.contains("scoring_mode")) {
    s.scoring_mode = parse_scoring_mode(convert<std::string>(j.at("scoring_mode"), where + ".scoring_mode"));
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

Vec2 shot_tip(const TargetSpec& spec, const ShotPlan& shot) { return spec.center + spec.outer_radius * shot.offset; }

ShotSpec shot_spec(const TargetSpec& spec, const ShotPlan& shot) {
  ShotSpec out;
  out.true_tip = shot_tip(spec, shot);
  out.shaft_angle = shot.shaft_angle ? *shot.shaft_angle : (shot.offset.y >= 0.0 ? 0.0 : std::numbers::pi);
  out.shaft_length = shot.shaft_length;
  out.shaft_width = shot.shaft_width;
  out.shaft_color = shot.shaft_color;
  return out;
}

std::vector<ShotPlan> planned_shots(const Scenario& s) {
  std::vector<ShotPlan> shots = s.shots;
  if (!s.generate) return shots;
  constexpr int kAttemptsPerShot = 10000;
  std::mt19937_64 rng(derive_seed(s.seed, 0x5407));
  for (int i = 0; i < s.generate->count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttemptsPerShot && !placed; ++attempt) {
      const double r = s.generate->max_radius_ratio * std::sqrt(unit_uniform(rng));
      const double phi = 2.0 * std::numbers::pi * unit_uniform(rng);
      ShotPlan shot;
      shot.offset = {r * std::cos(phi), r * std::sin(phi)};
      placed = std::all_of(s.cameras.begin(), s.cameras.end(), [&](const ScenarioCamera& c) {
        return boundary_margin(c.target, shot_tip(c.target, shot)) >= s.generate->min_boundary_margin;
      });
      if (placed) shots.push_back(shot);
    }
    if (!placed) throw Error(ErrorCode::Config, "scenario: cannot place a shot with the requested boundary margin");
  }
  return shots;
}

}  // namespace ringscore
