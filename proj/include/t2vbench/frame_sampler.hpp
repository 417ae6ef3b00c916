#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/error.hpp"
#include "t2vbench/image.hpp"

namespace t2vbench {

/// A frame is either a file on disk (decoded on demand) or a caller-provided raster.
using FrameRef = std::variant<std::filesystem::path, std::shared_ptr<const Image>>;

inline Image load_frame(const FrameRef& ref) {
  if (const auto* p = std::get_if<std::filesystem::path>(&ref)) return load_image(*p);
  const auto& img = std::get<std::shared_ptr<const Image>>(ref);
  if (!img) throw precondition_error("null frame");
  return *img;
}

struct VideoAsset {
  std::string video_id;
  int frame_count = 0;
  double src_fps = 0;
  int width = 0;
  int height = 0;
  std::vector<FrameRef> frames;

  void validate() const {
    if (video_id.empty()) throw schema_error("video_id is empty");
    if (frame_count < 1) throw schema_error("video '" + video_id + "' has no frames");
    if (!(src_fps > 0)) throw schema_error("video '" + video_id + "' has non-positive fps");
    if (width <= 0 || height <= 0) throw schema_error("video '" + video_id + "' has invalid size");
    if (static_cast<int>(frames.size()) != frame_count)
      throw schema_error("video '" + video_id + "' frame list does not match frame_count");
  }

  double diagonal() const { return std::hypot(static_cast<double>(width), static_cast<double>(height)); }
};

enum class FramePurpose { mllm_grid, detection, tracking };

struct FramePlan {
  std::vector<int> indices;
  FramePurpose purpose{FramePurpose::detection};
  bool operator==(const FramePlan&) const = default;
};

/// Endpoint-inclusive even sampling: index_i = floor(i * (n_total - 1) / (k - 1)).
/// Duplicates appear when the clip is shorter than k.
inline std::vector<int> uniform_indices(int n_total, int k) {
  if (n_total < 1 || k < 1) throw precondition_error("uniform_indices needs n_total >= 1 and k >= 1");
  if (k == 1) return {0};
  std::vector<int> out(static_cast<std::size_t>(k));
  const long long span = n_total - 1;
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = static_cast<int>(i * span / (k - 1));
  return out;
}

/// Tracking plan at `target_fps`: index_j = round_half_up(j * src_fps / target_fps)
/// while index_j < n_total, consecutive duplicates collapsed.
inline FramePlan resample_to_fps(double src_fps, int n_total, double target_fps) {
  if (!(src_fps > 0) || !(target_fps > 0)) throw precondition_error("fps must be positive");
  FramePlan plan{{}, FramePurpose::tracking};
  const double step = src_fps / target_fps;
  for (long long j = 0;; ++j) {
    const auto idx = static_cast<long long>(std::floor(static_cast<double>(j) * step + 0.5));
    if (idx >= n_total) break;
    if (plan.indices.empty() || plan.indices.back() != idx) plan.indices.push_back(static_cast<int>(idx));
  }
  return plan;
}

inline FramePlan mllm_plan(const VideoAsset& v, int k) {
  return {uniform_indices(v.frame_count, k), FramePurpose::mllm_grid};
}

inline FramePlan detection_plan(const VideoAsset& v, int k) {
  return {uniform_indices(v.frame_count, k), FramePurpose::detection};
}

inline constexpr int kGridRows = 2;
inline constexpr int kGridCols = 3;

/// 2x3 row-major mosaic: frame 0 top-left, frame 5 bottom-right.
inline Image compose_grid(std::span<const Image> frames) {
  if (frames.size() != kGridRows * kGridCols)
    throw precondition_error("compose_grid needs exactly 6 frames, got " + std::to_string(frames.size()));
  const auto& first = frames.front();
  for (const auto& f : frames) {
    if (f.width != first.width || f.height != first.height || f.channels != first.channels)
      throw dimension_mismatch_error("grid frames differ in size or channel count");
  }
  Image grid(first.width * kGridCols, first.height * kGridRows, first.channels);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int ox = static_cast<int>(i % kGridCols) * first.width;
    const int oy = static_cast<int>(i / kGridCols) * first.height;
    for (int y = 0; y < first.height; ++y)
      std::copy_n(frames[i].at(0, y), first.row_bytes(), grid.at(ox, oy + y));
  }
  return grid;
}

inline Image extract_grid_cell(const Image& grid, int cell) {
  if (cell < 0 || cell >= kGridRows * kGridCols) throw precondition_error("grid cell out of range");
  if (grid.width % kGridCols != 0 || grid.height % kGridRows != 0)
    throw dimension_mismatch_error("grid size is not divisible into 2x3 cells");
  const int w = grid.width / kGridCols;
  const int h = grid.height / kGridRows;
  Image out(w, h, grid.channels);
  const int ox = (cell % kGridCols) * w;
  const int oy = (cell / kGridCols) * h;
  for (int y = 0; y < h; ++y) std::copy_n(grid.at(ox, oy + y), out.row_bytes(), out.at(0, y));
  return out;
}

inline std::string frame_file_name(int index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05d%s", index, ext);
  return buf;
}

/// Loads a frame directory: `video.json` ({video_id, fps, width, height,
/// [frame_count]}) plus `frame_%05d.png|.ppm` files. With no frame files the
/// descriptor's frame_count is used and frames stay unresolved references,
/// which is enough for fixture replay.
inline VideoAsset load_video_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto desc_path = dir / "video.json";
  std::ifstream in(desc_path);
  if (!in) throw io_error("missing video descriptor " + desc_path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw schema_error(desc_path.string() + ": " + e.what());
  }
  VideoAsset v;
  try {
    v.video_id = j.value("video_id", dir.filename().string());
    v.src_fps = j.at("fps").get<double>();
    v.width = j.at("width").get<int>();
    v.height = j.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw schema_error(desc_path.string() + ": " + e.what());
  }

  const char* ext = nullptr;
  for (const char* candidate : {".png", ".ppm"}) {
    if (fs::exists(dir / frame_file_name(0, candidate))) {
      ext = candidate;
      break;
    }
  }
  if (ext) {
    int n = 0;
    while (fs::exists(dir / frame_file_name(n, ext))) {
      v.frames.emplace_back(dir / frame_file_name(n, ext));
      ++n;
    }
    v.frame_count = n;
    if (j.contains("frame_count") && j["frame_count"].get<int>() != n)
      throw schema_error(desc_path.string() + ": frame_count disagrees with frame files");
  } else {
    if (!j.contains("frame_count")) throw schema_error(desc_path.string() + ": no frames and no frame_count");
    v.frame_count = j["frame_count"].get<int>();
    for (int i = 0; i < v.frame_count; ++i) v.frames.emplace_back(dir / frame_file_name(i, ".png"));
  }
  v.validate();
  return v;
}

}  // namespace t2vbench
