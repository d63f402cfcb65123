#include "ringscore/scoring.hpp"

#include <algorithm>
#include <numeric>

namespace ringscore {

int score_point(const TargetModel& target, Vec2 p) {
  const RingModel* innermost = nullptr;
  for (const RingModel& ring : target.rings) {
    if (point_in_ellipse(ring.boundary, p) &&
        (innermost == nullptr || ring.boundary.area() < innermost->boundary.area())) {
      innermost = &ring;
    }
  }
  return innermost ? innermost->score : 0;
}

int score_point_by_traversal(const TargetModel& target, Vec2 p) {
  int previous = 0;
  for (const RingModel& ring : target.rings) {
    if (!point_in_ellipse(ring.boundary, p)) return previous;
    previous = ring.score;
  }
  return previous;
}

ShotFragment fuse_camera_scores(std::map<std::string, std::optional<int>> camera_scores) {
  ShotFragment fragment;
  fragment.camera_scores = std::move(camera_scores);
  std::optional<int> best;
  for (const auto& [id, score] : fragment.camera_scores) {
    if (score && (!best || *score > *best)) best = score;
  }
  fragment.final_score = best.value_or(0);
  fragment.flagged = !best.has_value();
  return fragment;
}

ShotFragment score_arrow(const std::vector<CameraOutcome>& outcomes,
                         const std::map<std::string, TargetModel>& targets) {
  std::map<std::string, std::optional<int>> scores;
  for (const CameraOutcome& outcome : outcomes) {
    auto& slot = scores[outcome.camera_id];
    if (!outcome.detection) continue;
    const auto target = targets.find(outcome.camera_id);
    if (target == targets.end()) continue;
    slot = score_point(target->second, pixel_center(outcome.detection->tip));
  }
  return fuse_camera_scores(std::move(scores));
}

Session::Session(std::vector<std::string> players) : players_(std::move(players)) {
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (players_[i].empty()) throw Error(ErrorCode::BadParameter, "player names must be non-empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (players_[i] == players_[j]) throw Error(ErrorCode::BadParameter, "duplicate player " + players_[i]);
    }
  }
  totals_.assign(players_.size(), 0);
  arrows_.assign(players_.size(), 0);
}

std::size_t Session::index_of(const std::string& player) const {
  const auto it = std::find(players_.begin(), players_.end(), player);
  if (it == players_.end()) throw Error(ErrorCode::UnknownPlayer, "player '" + player + "' is not registered");
  return static_cast<std::size_t>(it - players_.begin());
}

long Session::total(const std::string& player) const { return totals_[index_of(player)]; }

Session Session::record_shot(const std::string& player, const ShotFragment& fragment) const {
  const std::size_t i = index_of(player);
  Session next = *this;
  next.arrows_[i] += 1;
  next.totals_[i] += fragment.final_score;
  next.records_.push_back({player, next.arrows_[i], fragment.camera_scores, fragment.final_score, fragment.flagged});
  return next;
}

std::vector<std::pair<std::string, long>> ranking(const Session& session) {
  std::vector<std::pair<std::string, long>> out;
  for (const std::string& p : session.players()) out.emplace_back(p, session.total(p));
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.second > r.second; });
  return out;
}

}  // namespace ringscore
