#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"
#include "t2vbench/perception.hpp"

namespace t2vbench {

struct FrameScore {
  int frame_index = 0;
  double score = 0;
  std::optional<std::pair<Detection, Detection>> selected_pair;
  std::string note;
};

inline double iou(const BoundingBox& a, const BoundingBox& b) { return box_iou(a, b); }

/// 2D relation of object 1 (center c1) to object 2 (center c2) in image
/// coordinates. The dominant-axis condition makes the four relations
/// mutually exclusive.
inline bool eval_2d_relation(Point2 c1, Point2 c2, SpatialRelation rel) {
  const double dx = std::abs(c1.x - c2.x);
  const double dy = std::abs(c1.y - c2.y);
  switch (rel) {
    case SpatialRelation::left: return c1.x < c2.x && dx > dy;
    case SpatialRelation::right: return c1.x > c2.x && dx > dy;
    case SpatialRelation::above: return c1.y < c2.y && dy > dx;
    case SpatialRelation::below: return c1.y > c2.y && dy > dx;
    default: break;
  }
  throw precondition_error("eval_2d_relation called with a 3D relation");
}

namespace detail {

struct PairCandidate {
  const Detection* first;
  const Detection* second;
  double product;
  double overlap;
};

// Higher confidence product first, then lower IoU, then lexicographic boxes.
inline bool better_pair(const PairCandidate& a, const PairCandidate& b) {
  if (a.product != b.product) return a.product > b.product;
  if (a.overlap != b.overlap) return a.overlap < b.overlap;
  if (a.first->box.tie() != b.first->box.tie()) return a.first->box.tie() < b.first->box.tie();
  return a.second->box.tie() < b.second->box.tie();
}

template <typename Accept>
std::optional<PairCandidate> select_pair(std::span<const Detection> dets, const std::string& object_1,
                                         const std::string& object_2, Accept&& accept) {
  std::optional<PairCandidate> best;
  for (const auto& a : dets) {
    if (a.query != object_1) continue;
    for (const auto& b : dets) {
      if (b.query != object_2) continue;
      if (object_1 == object_2 && a.box == b.box) continue;
      if (!accept(a, b)) continue;
      PairCandidate cand{&a, &b, a.confidence * b.confidence, iou(a.box, b.box)};
      if (!best || better_pair(cand, *best)) best = cand;
    }
  }
  return best;
}

inline bool has_query(std::span<const Detection> dets, const std::string& q) {
  return std::any_of(dets.begin(), dets.end(), [&](const Detection& d) { return d.query == q; });
}

}  // namespace detail

/// Per-frame 2D spatial score: 1 - IoU of the most probable pair satisfying
/// the relation, 0 when no pair satisfies it or an object is missing.
inline FrameScore frame_spatial_score_2d(std::span<const Detection> dets, const SpatialMeta& meta,
                                         int frame_index = 0) {
  if (!is_2d(meta.relation)) throw precondition_error("frame_spatial_score_2d needs a 2D relation");
  FrameScore fs{frame_index, 0.0, std::nullopt, {}};
  if (!detail::has_query(dets, meta.object_1) || !detail::has_query(dets, meta.object_2)) {
    fs.note = "object not detected";
    return fs;
  }
  const auto best = detail::select_pair(dets, meta.object_1, meta.object_2, [&](const Detection& a, const Detection& b) {
    return eval_2d_relation(a.box.center(), b.box.center(), meta.relation);
  });
  if (!best) {
    fs.note = "no pair satisfies relation";
    return fs;
  }
  fs.score = 1.0 - best->overlap;
  fs.selected_pair = std::make_pair(*best->first, *best->second);
  return fs;
}

/// Mean depth over the set pixels of `mask`.
inline double object_depth(const Mask& mask, const DepthMap& depth) {
  if (mask.width != depth.width || mask.height != depth.height)
    throw dimension_mismatch_error("mask and depth map sizes differ");
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i]) {
      sum += depth.values[i];
      ++n;
    }
  }
  if (n == 0) throw empty_mask_error("mask '" + mask.object_query + "' has no set pixels");
  return sum / static_cast<double>(n);
}

inline constexpr double kDepthTieRelTol = 1e-9;

/// Binary depth-ordering verdict under smaller-is-nearer. Equal depths score 0.
inline double depth_order_score(double d1, double d2, SpatialRelation rel) {
  if (std::abs(d1 - d2) <= kDepthTieRelTol * std::max(std::abs(d1), std::abs(d2))) return 0.0;
  switch (rel) {
    case SpatialRelation::in_front_of: return d1 < d2 ? 1.0 : 0.0;
    case SpatialRelation::behind: return d1 > d2 ? 1.0 : 0.0;
    default: break;
  }
  throw precondition_error("depth_order_score needs a 3D relation");
}

/// Picks the most probable object pair for a 3D relation (IoU only breaks ties).
inline std::optional<std::pair<Detection, Detection>> select_pair_3d(std::span<const Detection> dets,
                                                                     const SpatialMeta& meta) {
  auto best = detail::select_pair(dets, meta.object_1, meta.object_2, [](const auto&, const auto&) { return true; });
  if (!best) return std::nullopt;
  return std::make_pair(*best->first, *best->second);
}

/// Per-frame 3D spatial score. `segment` yields the mask for a selected
/// detection; it is only called once a pair exists.
inline FrameScore frame_spatial_score_3d(std::span<const Detection> dets,
                                         const std::function<Mask(const Detection&)>& segment,
                                         const DepthMap& depth, const SpatialMeta& meta, int frame_index = 0) {
  if (is_2d(meta.relation)) throw precondition_error("frame_spatial_score_3d needs in-front-of/behind");
  FrameScore fs{frame_index, 0.0, std::nullopt, {}};
  const auto pair = select_pair_3d(dets, meta);
  if (!pair) {
    fs.note = "object not detected";
    return fs;
  }
  const double d1 = object_depth(segment(pair->first), depth);
  const double d2 = object_depth(segment(pair->second), depth);
  fs.score = depth_order_score(d1, d2, meta.relation);
  fs.selected_pair = pair;
  char buf[96];
  std::snprintf(buf, sizeof buf, "depth %.6g vs %.6g", d1, d2);
  fs.note = buf;
  return fs;
}

/// Fraction of object classes whose detected count equals the prompted count.
inline FrameScore frame_numeracy_score(std::span<const Detection> dets, const NumeracyMeta& meta,
                                       int frame_index = 0) {
  FrameScore fs{frame_index, 0.0, std::nullopt, {}};
  if (meta.objects.empty()) return fs;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < meta.objects.size(); ++i) {
    const auto n = std::count_if(dets.begin(), dets.end(), [&](const Detection& d) { return d.query == meta.objects[i]; });
    if (n == meta.numbers[i]) ++matched;
    if (!fs.note.empty()) fs.note += ",";
    fs.note += meta.objects[i] + "=" + std::to_string(n);
  }
  fs.score = static_cast<double>(matched) / static_cast<double>(meta.objects.size());
  return fs;
}

inline double video_score(std::span<const FrameScore> frames) {
  if (frames.empty()) throw empty_input_error("no frame scores");
  double sum = 0;
  for (const auto& f : frames) sum += f.score;
  return sum / static_cast<double>(frames.size());
}

}  // namespace t2vbench
