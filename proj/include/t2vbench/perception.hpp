#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/error.hpp"
#include "t2vbench/frame_sampler.hpp"
#include "t2vbench/image.hpp"

namespace t2vbench {

struct Point2 {
  double x = 0;
  double y = 0;
  bool operator==(const Point2&) const = default;
};

struct BoundingBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool valid() const { return x0 < x1 && y0 < y1; }
  double area() const { return valid() ? (x1 - x0) * (y1 - y0) : 0.0; }
  Point2 center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  auto tie() const { return std::tie(x0, y0, x1, y1); }

  BoundingBox clamped(double width, double height) const {
    return {std::clamp(x0, 0.0, width), std::clamp(y0, 0.0, height), std::clamp(x1, 0.0, width),
            std::clamp(y1, 0.0, height)};
  }

  bool operator==(const BoundingBox&) const = default;
};

struct Detection {
  std::string query;
  BoundingBox box;
  double confidence = 0;
  bool operator==(const Detection&) const = default;
};

/// Binary object mask; run-length form alternates 0-runs and 1-runs in
/// row-major order, starting with a (possibly empty) 0-run.
struct Mask {
  int frame_index = 0;
  std::string object_query;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return false;
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

  std::vector<std::int64_t> to_rle() const {
    std::vector<std::int64_t> counts;
    std::uint8_t current = 0;
    std::int64_t run = 0;
    for (auto b : bits) {
      const std::uint8_t v = b ? 1 : 0;
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
    counts.push_back(run);
    return counts;
  }

  static Mask from_rle(std::span<const std::int64_t> counts, int width, int height) {
    if (width <= 0 || height <= 0) throw protocol_error("mask has invalid size");
    Mask m;
    m.width = width;
    m.height = height;
    m.bits.reserve(static_cast<std::size_t>(width) * height);
    std::uint8_t v = 0;
    for (auto c : counts) {
      if (c < 0) throw protocol_error("negative RLE run");
      if (m.bits.size() + static_cast<std::size_t>(c) > static_cast<std::size_t>(width) * height)
        throw protocol_error("RLE runs exceed mask size");
      m.bits.insert(m.bits.end(), static_cast<std::size_t>(c), v);
      v ^= 1;
    }
    if (m.bits.size() != static_cast<std::size_t>(width) * height)
      throw protocol_error("RLE runs do not cover the mask");
    return m;
  }
};

/// Per-pixel depth, smaller = nearer to camera once it leaves the gateway.
struct DepthMap {
  int frame_index = 0;
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct TrackedPoint {
  int point_id = 0;
  std::vector<Point2> positions;
  std::vector<bool> visible;
};

struct TrackSet {
  double fps = 0;
  std::vector<TrackedPoint> points;
};

struct MllmResponse {
  std::string request_id;
  std::string text;                // final-turn output, the one that gets scored
  std::vector<std::string> texts;  // one per turn, for transcripts
};

// ---------------------------------------------------------------------------

/// Identifies an artifact: which video, which frame (nullopt = whole clip),
/// and the frame size used for clamping/validation.
struct ArtifactKey {
  std::string video_id;
  std::optional<int> frame_index;
  int width = 0;
  int height = 0;

  std::string frame_token() const { return frame_index ? std::to_string(*frame_index) : "all"; }
};

using ImageSource = std::function<Image()>;

struct MllmRequest {
  std::string key;  // metric/stage name, e.g. "grid-llava"
  std::vector<ImageSource> images;
  std::vector<std::string> turns;
};

/// Backend returning raw wire-protocol response bodies. The gateway validates
/// every body, so fixture files and sidecar responses share one schema.
class PerceptionAdapter {
 public:
  virtual ~PerceptionAdapter() = default;

  virtual nlohmann::json detect(const ArtifactKey& key, const FrameRef& frame,
                                const std::vector<std::string>& queries, double box_threshold) = 0;
  virtual nlohmann::json segment(const ArtifactKey& key, const FrameRef& frame, const Detection& det) = 0;
  virtual nlohmann::json depth(const ArtifactKey& key, const FrameRef& frame) = 0;
  virtual nlohmann::json track(const ArtifactKey& key, std::span<const FrameRef> frames, double fps,
                               int grid_stride) = 0;
  virtual nlohmann::json mllm(const ArtifactKey& key, const MllmRequest& request) = 0;
  virtual bool supports_multi_turn() const { return true; }
};

inline double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const double iy = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const double inter = ix * iy;
  if (inter <= 0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

namespace detail {

inline bool detection_order(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.query != b.query) return a.query < b.query;
  return a.box.tie() < b.box.tie();
}

}  // namespace detail

/// Greedy per-query suppression: within each query group, in descending
/// confidence, a detection is dropped iff its IoU with an already-kept one is
/// >= iou_thresh. Output is sorted by descending confidence.
inline std::vector<Detection> dedup_boxes(std::vector<Detection> dets, double iou_thresh) {
  if (!(iou_thresh > 0) || iou_thresh > 1) throw precondition_error("iou_thresh must lie in (0,1]");
  std::stable_sort(dets.begin(), dets.end(), detail::detection_order);
  std::vector<Detection> kept;
  for (auto& d : dets) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return k.query == d.query && box_iou(k.box, d.box) >= iou_thresh;
    });
    if (!dup) kept.push_back(std::move(d));
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Wire-body parsing. Every schema violation is a ProtocolError.

namespace wire {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) throw protocol_error("response is not a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw protocol_error(std::string("response lacks '") + key + "'");
  return *it;
}

inline double finite_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw protocol_error(std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw protocol_error(std::string(what) + " is not finite");
  return v;
}

inline int positive_int(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0 || v.get<long long>() > (1 << 20))
    throw protocol_error(std::string("'") + key + "' must be a positive integer");
  return v.get<int>();
}

inline Detection parse_detection(const nlohmann::json& j) {
  Detection d;
  const auto& q = field(j, "query");
  if (!q.is_string()) throw protocol_error("detection query is not a string");
  d.query = q.get<std::string>();
  const auto& box = field(j, "box");
  if (!box.is_array() || box.size() != 4) throw protocol_error("box must be [x0,y0,x1,y1]");
  d.box = {finite_number(box[0], "box"), finite_number(box[1], "box"), finite_number(box[2], "box"),
           finite_number(box[3], "box")};
  if (!d.box.valid()) throw protocol_error("box has x1 <= x0 or y1 <= y0");
  d.confidence = finite_number(field(j, "confidence"), "confidence");
  if (d.confidence < 0 || d.confidence > 1) throw protocol_error("confidence outside [0,1]");
  return d;
}

inline std::vector<Detection> parse_detections(const nlohmann::json& body) {
  const auto& arr = field(body, "detections");
  if (!arr.is_array()) throw protocol_error("'detections' is not an array");
  std::vector<Detection> out;
  for (const auto& e : arr) out.push_back(parse_detection(e));
  return out;
}

inline Mask parse_mask(const nlohmann::json& body) {
  const auto& rle = field(body, "rle");
  if (!rle.is_array()) throw protocol_error("'rle' is not an array");
  std::vector<std::int64_t> counts;
  for (const auto& c : rle) {
    if (!c.is_number_integer()) throw protocol_error("RLE counts must be integers");
    counts.push_back(c.get<std::int64_t>());
  }
  return Mask::from_rle(counts, positive_int(body, "width"), positive_int(body, "height"));
}

enum class DepthEncoding { depth, inverse_depth };

inline DepthEncoding parse_convention(const nlohmann::json& body) {
  const auto it = body.find("convention");
  if (it == body.end()) return DepthEncoding::depth;
  if (!it->is_string()) throw protocol_error("'convention' is not a string");
  const auto c = it->get<std::string>();
  if (c == "depth" || c == "smaller_is_nearer") return DepthEncoding::depth;
  if (c == "inverse_depth" || c == "inverse-depth" || c == "disparity" || c == "larger_is_nearer")
    return DepthEncoding::inverse_depth;
  throw protocol_error("unknown depth convention '" + c + "'");
}

/// Raw depth values from either a JSON array ("values") or little-endian
/// float32 bytes ("values_b64").
inline std::vector<double> parse_depth_values(const nlohmann::json& body, std::size_t expected) {
  std::vector<double> values;
  if (auto it = body.find("values"); it != body.end()) {
    if (!it->is_array()) throw protocol_error("'values' is not an array");
    values.reserve(it->size());
    for (const auto& v : *it) values.push_back(finite_number(v, "depth value"));
  } else if (auto it = body.find("values_b64"); it != body.end()) {
    if (!it->is_string()) throw protocol_error("'values_b64' is not a string");
    const auto bytes = base64_decode(it->get<std::string>());
    if (bytes.size() % 4 != 0) throw protocol_error("'values_b64' is not float32 data");
    values.resize(bytes.size() / 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::uint32_t bits = static_cast<std::uint32_t>(bytes[4 * i]) |
                                 (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                                 (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                                 (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
      float f;
      std::memcpy(&f, &bits, sizeof f);
      if (!std::isfinite(f)) throw protocol_error("depth value is not finite");
      values[i] = f;
    }
  } else {
    throw protocol_error("depth response lacks 'values' or 'values_b64'");
  }
  if (values.size() != expected) throw protocol_error("depth value count does not match width*height");
  return values;
}

inline std::vector<TrackedPoint> parse_tracks(const nlohmann::json& body, std::size_t frames) {
  const auto& pts = field(body, "points");
  if (!pts.is_array()) throw protocol_error("'points' is not an array");
  std::vector<TrackedPoint> out;
  int next_id = 0;
  for (const auto& p : pts) {
    TrackedPoint tp;
    tp.point_id = p.contains("point_id") && p["point_id"].is_number_integer() ? p["point_id"].get<int>() : next_id;
    ++next_id;
    const auto& pos = field(p, "positions");
    const auto& vis = field(p, "visible");
    if (!pos.is_array() || !vis.is_array()) throw protocol_error("positions/visible must be arrays");
    if (pos.size() != frames || vis.size() != frames)
      throw protocol_error("track point " + std::to_string(tp.point_id) + " has " + std::to_string(pos.size()) +
                           " positions for " + std::to_string(frames) + " sampled frames");
    for (const auto& xy : pos) {
      if (!xy.is_array() || xy.size() != 2) throw protocol_error("position must be [x,y]");
      tp.positions.push_back({finite_number(xy[0], "x"), finite_number(xy[1], "y")});
    }
    for (const auto& v : vis) {
      if (!v.is_boolean()) throw protocol_error("visibility flags must be booleans");
      tp.visible.push_back(v.get<bool>());
    }
    out.push_back(std::move(tp));
  }
  return out;
}

inline std::vector<std::string> parse_texts(const nlohmann::json& body) {
  const auto& arr = field(body, "texts");
  if (!arr.is_array()) throw protocol_error("'texts' is not an array");
  std::vector<std::string> out;
  for (const auto& t : arr) {
    if (!t.is_string()) throw protocol_error("judge texts must be strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

}  // namespace wire

// ---------------------------------------------------------------------------

/// The single boundary for perception and judge artifacts. Validates every
/// adapter response and normalizes depth to smaller-is-nearer.
class PerceptionGateway {
 public:
  explicit PerceptionGateway(std::shared_ptr<PerceptionAdapter> adapter) : adapter_(std::move(adapter)) {
    if (!adapter_) throw adapter_unavailable_error("no perception adapter configured");
  }

  std::vector<Detection> detect(const ArtifactKey& key, const FrameRef& frame,
                                const std::vector<std::string>& queries, double box_threshold) const {
    if (queries.empty()) throw precondition_error("detect needs at least one query");
    const auto body = adapter_->detect(key, frame, queries, box_threshold);
    const std::unordered_set<std::string> wanted(queries.begin(), queries.end());
    std::vector<Detection> out;
    for (auto& d : wire::parse_detections(body)) {
      if (!wanted.count(d.query)) throw protocol_error("detection for unrequested query '" + d.query + "'");
      if (d.confidence < box_threshold) continue;
      if (key.width > 0 && key.height > 0) {
        d.box = d.box.clamped(key.width, key.height);
        if (!d.box.valid()) continue;  // entirely outside the frame
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  Mask segment(const ArtifactKey& key, const FrameRef& frame, const Detection& det) const {
    if (key.width > 0 && key.height > 0 && !det.box.clamped(key.width, key.height).valid())
      throw precondition_error("segment box lies outside the frame");
    auto mask = wire::parse_mask(adapter_->segment(key, frame, det));
    if (key.width > 0 && (mask.width != key.width || mask.height != key.height))
      throw protocol_error("mask size does not match frame size");
    if (mask.count() == 0) throw empty_mask_error("empty mask for '" + det.query + "'");
    mask.frame_index = key.frame_index.value_or(0);
    mask.object_query = det.query;
    return mask;
  }

  DepthMap estimate_depth(const ArtifactKey& key, const FrameRef& frame) const {
    const auto body = adapter_->depth(key, frame);
    DepthMap d;
    d.frame_index = key.frame_index.value_or(0);
    d.width = wire::positive_int(body, "width");
    d.height = wire::positive_int(body, "height");
    if (key.width > 0 && (d.width != key.width || d.height != key.height))
      throw protocol_error("depth size does not match frame size");
    d.values = wire::parse_depth_values(body, static_cast<std::size_t>(d.width) * d.height);
    if (wire::parse_convention(body) == wire::DepthEncoding::inverse_depth) {
      const double peak = *std::max_element(d.values.begin(), d.values.end());
      for (auto& v : d.values) v = peak - v;
    }
    for (double v : d.values)
      if (v < 0) throw protocol_error("negative depth value");
    return d;
  }

  TrackSet track(const VideoAsset& video, const FramePlan& plan, int grid_stride = 8) const {
    if (plan.indices.empty()) throw precondition_error("empty tracking plan");
    std::vector<FrameRef> frames;
    for (int idx : plan.indices) {
      if (idx < 0 || idx >= video.frame_count) throw precondition_error("tracking plan index out of range");
      frames.push_back(video.frames[static_cast<std::size_t>(idx)]);
    }
    const double fps = video.src_fps * static_cast<double>(plan.indices.size()) /
                       std::max(1.0, static_cast<double>(video.frame_count));
    const ArtifactKey key{video.video_id, std::nullopt, video.width, video.height};
    TrackSet ts;
    ts.fps = fps;
    ts.points = wire::parse_tracks(adapter_->track(key, frames, fps, grid_stride), plan.indices.size());
    return ts;
  }

  MllmResponse query_mllm(const ArtifactKey& key, const MllmRequest& request) const {
    if (request.images.empty()) throw precondition_error("judge request has no image");
    if (request.turns.empty() || request.turns.size() > 2) throw precondition_error("judge request needs 1 or 2 turns");
    if (request.turns.size() == 2 && !adapter_->supports_multi_turn())
      throw protocol_error("adapter does not support multi-turn judging");
    auto texts = wire::parse_texts(adapter_->mllm(key, request));
    if (texts.size() != request.turns.size())
      throw protocol_error("judge returned " + std::to_string(texts.size()) + " texts for " +
                           std::to_string(request.turns.size()) + " turns");
    if (texts.back().empty()) throw protocol_error("judge returned empty text");
    MllmResponse r;
    r.request_id = key.video_id + "/" + key.frame_token() + "/" + request.key;
    r.text = texts.back();
    r.texts = std::move(texts);
    return r;
  }

  PerceptionAdapter& adapter() const { return *adapter_; }

 private:
  std::shared_ptr<PerceptionAdapter> adapter_;
};

}  // namespace t2vbench
