#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/error.hpp"
#include "t2vbench/image.hpp"
#include "t2vbench/perception.hpp"

namespace t2vbench {

/// Replays canned artifacts from
///   <root>/<video_id>/<task>/<frame_index|all>/<key>.json
/// where each file body is the sidecar's wire response for that request.
/// Detections are stored one file per query and concatenated on read. Depth
/// may alternatively be a 16-bit `depth.png` (treated as smaller-is-nearer).
///
/// Read-only after construction, so concurrent calls are safe.
class FixtureStore final : public PerceptionAdapter {
 public:
  explicit FixtureStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    if (!std::filesystem::is_directory(root_, ec))
      throw adapter_unavailable_error("fixture root not found: " + root_.string());
  }

  /// File-name form of a query or key: anything outside [A-Za-z0-9 ._-] becomes '_'.
  static std::string sanitize(std::string_view key) {
    std::string out(key);
    for (auto& c : out) {
      const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == ' ' || c == '.' || c == '_' || c == '-';
      if (!ok) c = '_';
    }
    return out;
  }

  std::filesystem::path path_for(const ArtifactKey& key, std::string_view task, std::string_view name) const {
    return root_ / key.video_id / std::string(task) / key.frame_token() / (sanitize(name) + ".json");
  }

  nlohmann::json detect(const ArtifactKey& key, const FrameRef&, const std::vector<std::string>& queries,
                        double) override {
    nlohmann::json merged = {{"detections", nlohmann::json::array()}};
    for (const auto& q : queries) {
      const auto body = read(path_for(key, "detect", q));
      const auto& dets = wire::field(body, "detections");
      if (!dets.is_array()) throw protocol_error("'detections' is not an array");
      for (const auto& d : dets) merged["detections"].push_back(d);
    }
    return merged;
  }

  nlohmann::json segment(const ArtifactKey& key, const FrameRef&, const Detection& det) override {
    return read(path_for(key, "segment", det.query));
  }

  nlohmann::json depth(const ArtifactKey& key, const FrameRef&) override {
    const auto json_path = path_for(key, "depth", "depth");
    std::error_code ec;
    if (std::filesystem::exists(json_path, ec)) return read(json_path);
    const auto png_path = json_path.parent_path() / "depth.png";
    if (!std::filesystem::exists(png_path, ec)) throw missing_fixture_error(json_path.string());
    const auto raster = decode_png16(read_file_bytes(png_path));
    nlohmann::json values = nlohmann::json::array();
    for (auto v : raster.values) values.push_back(static_cast<double>(v));
    return {{"width", raster.width}, {"height", raster.height}, {"values", std::move(values)},
            {"convention", "depth"}};
  }

  nlohmann::json track(const ArtifactKey& key, std::span<const FrameRef>, double, int) override {
    return read(path_for(key, "track", "tracks"));
  }

  nlohmann::json mllm(const ArtifactKey& key, const MllmRequest& request) override {
    return read(path_for(key, "mllm", request.key));
  }

  const std::filesystem::path& root() const { return root_; }

 private:
  static nlohmann::json read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw missing_fixture_error(path.string());
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw protocol_error(path.string() + ": " + e.what());
    }
  }

  std::filesystem::path root_;
};

}  // namespace t2vbench
