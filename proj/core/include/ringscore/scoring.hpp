#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringscore/arrow.hpp"
#include "ringscore/target.hpp"

namespace ringscore {

/// Score of the innermost (smallest) ring containing p, boundary inclusive;
/// 0 when p lies outside every ring.
int score_point(const TargetModel& target, Vec2 p);

/// Walks the rings from largest to smallest and stops at the first one that no
/// longer contains p. Agrees with score_point whenever the rings are nested.
int score_point_by_traversal(const TargetModel& target, Vec2 p);

/// Result of one camera's arrow detection.
struct CameraOutcome {
  std::string camera_id;
  std::optional<ArrowDetection> detection;
  std::optional<ErrorCode> error;
  std::string message;
};

/// Per-shot camera scores (absent where the camera failed) and their max.
struct ShotFragment {
  std::map<std::string, std::optional<int>> camera_scores;
  int final_score = 0;
  bool flagged = false;  ///< every camera failed
};

ShotFragment fuse_camera_scores(std::map<std::string, std::optional<int>> camera_scores);

/// Scores every successful detection against its own camera's target, then fuses by max.
ShotFragment score_arrow(const std::vector<CameraOutcome>& outcomes,
                         const std::map<std::string, TargetModel>& targets);

struct ScoreRecord {
  std::string player;
  int arrow_index = 0;  ///< 1-based, per player
  std::map<std::string, std::optional<int>> camera_scores;
  int final_score = 0;
  bool flagged = false;
  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

class Session {
 public:
  Session() = default;
  /// Throws BadParameter on duplicate or empty names.
  explicit Session(std::vector<std::string> players);

  const std::vector<std::string>& players() const noexcept { return players_; }
  const std::vector<ScoreRecord>& records() const noexcept { return records_; }
  long total(const std::string& player) const;

  /// Returns the session with the shot appended. Throws UnknownPlayer.
  Session record_shot(const std::string& player, const ShotFragment& fragment) const;

 private:
  std::size_t index_of(const std::string& player) const;

  std::vector<std::string> players_;
  std::vector<ScoreRecord> records_;
  std::vector<long> totals_;
  std::vector<int> arrows_;
};

/// Descending totals; ties keep registration order.
std::vector<std::pair<std::string, long>> ranking(const Session& session);

}  // namespace ringscore
