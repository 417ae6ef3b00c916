#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"
#include "t2vbench/frame_sampler.hpp"
#include "t2vbench/perception.hpp"

namespace t2vbench {

/// Pixel displacement, +x right, +y down.
struct MotionVector {
  double dx = 0;
  double dy = 0;
  bool operator==(const MotionVector&) const = default;
};

struct MotionVerdict {
  std::string object_query;
  std::optional<MotionVector> relative;  // unset when the split failed
  std::optional<Direction> direction;
  int score = 0;
  std::string note;
};

struct TrackSplit {
  std::vector<TrackedPoint> foreground;
  std::vector<TrackedPoint> background;
};

namespace detail {

inline bool on_mask(const Mask& m, Point2 p) {
  return m.at(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)));
}

inline int visible_count(const TrackedPoint& p) {
  return static_cast<int>(std::count(p.visible.begin(), p.visible.end(), true));
}

}  // namespace detail

/// Assigns each point by its seed-frame position: foreground if it lands on a
/// set pixel of `fg_mask`, background if it lands on none of `object_masks`
/// (the union of every prompt object's mask). Points seen in fewer than two
/// sampled frames are dropped.
inline TrackSplit split_tracks(const TrackSet& tracks, const Mask& fg_mask, std::span<const Mask> object_masks = {}) {
  TrackSplit split;
  for (const auto& p : tracks.points) {
    if (p.positions.empty() || detail::visible_count(p) < 2) continue;
    const auto seed = p.positions.front();
    if (detail::on_mask(fg_mask, seed)) {
      split.foreground.push_back(p);
      continue;
    }
    bool on_any = false;
    for (const auto& m : object_masks) on_any = on_any || detail::on_mask(m, seed);
    if (!on_any) split.background.push_back(p);
  }
  if (split.foreground.empty()) throw no_foreground_points_error("no tracked points on '" + fg_mask.object_query + "'");
  if (split.background.empty()) throw no_background_points_error("no tracked background points");
  return split;
}

/// Mean of per-point (last visible - first visible) displacement.
inline MotionVector mean_displacement(std::span<const TrackedPoint> points) {
  if (points.empty()) throw empty_input_error("no points to average");
  double sx = 0, sy = 0;
  for (const auto& p : points) {
    std::optional<std::size_t> first, last;
    for (std::size_t i = 0; i < p.visible.size() && i < p.positions.size(); ++i) {
      if (!p.visible[i]) continue;
      if (!first) first = i;
      last = i;
    }
    if (!first || *first == *last) throw precondition_error("point visible in fewer than two frames");
    sx += p.positions[*last].x - p.positions[*first].x;
    sy += p.positions[*last].y - p.positions[*first].y;
  }
  const auto n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

/// Object motion with the background (camera) motion removed.
inline MotionVector relative_motion(MotionVector fg, MotionVector bg) { return {fg.dx - bg.dx, fg.dy - bg.dy}; }

/// Dominant-axis direction, or nullopt when the motion is below `eps` or no
/// axis dominates by `dominance`. Exact ties resolve to the x axis.
inline std::optional<Direction> classify_direction(MotionVector v, double eps, double dominance) {
  if (!(eps > 0) || !(dominance >= 1)) throw precondition_error("classify_direction needs eps > 0 and dominance >= 1");
  const double ax = std::abs(v.dx);
  const double ay = std::abs(v.dy);
  if (std::max(ax, ay) < eps) return std::nullopt;
  if (ax >= dominance * ay) return v.dx < 0 ? Direction::left : Direction::right;
  if (ay >= dominance * ax) return v.dy < 0 ? Direction::up : Direction::down;
  return std::nullopt;
}

struct MotionResult {
  double score = 0;
  std::vector<MotionVerdict> verdicts;
};

/// One seed-frame mask per metadata object (nullopt when the object was not
/// found). Per-object verdicts are binary; the video score is their mean.
inline MotionResult motion_binding_score(const VideoAsset& video, const TrackSet& tracks,
                                         std::span<const std::optional<Mask>> masks, const MotionMeta& meta,
                                         const EngineConfig& cfg) {
  std::vector<std::pair<std::string, Direction>> targets{{meta.object_1, meta.d_1}};
  if (meta.object_2 && meta.d_2) targets.emplace_back(*meta.object_2, *meta.d_2);
  if (masks.size() != targets.size()) throw precondition_error("need one mask slot per motion object");

  std::vector<Mask> present;
  for (const auto& m : masks)
    if (m) present.push_back(*m);

  const double eps = cfg.motion_eps_frac * video.diagonal();
  MotionResult result;
  double total = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    MotionVerdict v;
    v.object_query = targets[i].first;
    if (!masks[i]) {
      v.note = "object not found on seed frame";
      result.verdicts.push_back(std::move(v));
      continue;
    }
    try {
      const auto split = split_tracks(tracks, *masks[i], present);
      v.relative = relative_motion(mean_displacement(split.foreground), mean_displacement(split.background));
      v.direction = classify_direction(*v.relative, eps, cfg.dominance_ratio);
      v.score = v.direction == targets[i].second ? 1 : 0;
      if (!v.direction) v.note = "no dominant motion";
    } catch (const no_background_points_error& e) {
      v.note = e.what();
    } catch (const no_foreground_points_error& e) {
      v.note = e.what();
    }
    total += v.score;
    result.verdicts.push_back(std::move(v));
  }
  result.score = total / static_cast<double>(targets.size());
  return result;
}

}  // namespace t2vbench
