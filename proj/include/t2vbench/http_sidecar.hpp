#pragma once

#include <array>
#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "t2vbench/error.hpp"
#include "t2vbench/image.hpp"
#include "t2vbench/perception.hpp"

namespace t2vbench {

/// Talks to the inference sidecar over HTTP/JSON. Frames are sent as base64
/// PNG; all coordinates in responses are pixels of the transmitted image.
///
/// Requests of the same task are serialized; different tasks may overlap.
class HttpSidecar final : public PerceptionAdapter {
 public:
  struct Options {
    std::chrono::seconds connect_timeout{5};
    std::chrono::seconds read_timeout{300};
    bool multi_turn = true;
  };

  explicit HttpSidecar(std::string base_url) : HttpSidecar(std::move(base_url), Options{}) {}
  HttpSidecar(std::string base_url, Options opts) : base_url_(std::move(base_url)), opts_(opts) {
    if (base_url_.empty()) throw adapter_unavailable_error("empty sidecar URL");
  }

  nlohmann::json health() const {
    auto cli = client();
    auto res = cli.Get("/health");
    if (!res) throw adapter_unavailable_error("sidecar unreachable at " + base_url_);
    return parse_body(res->status, res->body, "/health");
  }

  nlohmann::json detect(const ArtifactKey&, const FrameRef& frame, const std::vector<std::string>& queries,
                        double box_threshold) override {
    nlohmann::json req = {{"image_b64", encode_frame(frame)}, {"queries", queries}, {"box_threshold", box_threshold}};
    return post(Task::detect, "/detect", req);
  }

  nlohmann::json segment(const ArtifactKey&, const FrameRef& frame, const Detection& det) override {
    nlohmann::json req = {{"image_b64", encode_frame(frame)},
                          {"box", {det.box.x0, det.box.y0, det.box.x1, det.box.y1}}};
    return post(Task::segment, "/segment", req);
  }

  nlohmann::json depth(const ArtifactKey&, const FrameRef& frame) override {
    return post(Task::depth, "/depth", {{"image_b64", encode_frame(frame)}});
  }

  nlohmann::json track(const ArtifactKey&, std::span<const FrameRef> frames, double fps, int grid_stride) override {
    nlohmann::json encoded = nlohmann::json::array();
    for (const auto& f : frames) encoded.push_back(encode_frame(f));
    return post(Task::track, "/track", {{"frames_b64", std::move(encoded)}, {"fps", fps}, {"grid_stride", grid_stride}});
  }

  nlohmann::json mllm(const ArtifactKey&, const MllmRequest& request) override {
    nlohmann::json images = nlohmann::json::array();
    for (const auto& src : request.images) images.push_back(base64_encode(encode_png(src())));
    return post(Task::mllm, "/mllm", {{"images_b64", std::move(images)}, {"turns", request.turns}});
  }

  bool supports_multi_turn() const override { return opts_.multi_turn; }

 private:
  enum class Task : std::size_t { detect, segment, depth, track, mllm, count };

  httplib::Client client() const {
    httplib::Client cli(base_url_);
    cli.set_connection_timeout(opts_.connect_timeout);
    cli.set_read_timeout(opts_.read_timeout);
    return cli;
  }

  static std::string encode_frame(const FrameRef& frame) { return base64_encode(encode_png(load_frame(frame))); }

  static nlohmann::json parse_body(int status, const std::string& body, const std::string& route) {
    if (status == 400) throw protocol_error(route + " rejected the request: " + body);
    if (status >= 500) throw adapter_unavailable_error(route + " failed with HTTP " + std::to_string(status));
    if (status != 200) throw protocol_error(route + " returned HTTP " + std::to_string(status));
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw protocol_error(route + " returned invalid JSON: " + e.what());
    }
  }

  nlohmann::json post(Task t, const std::string& route, const nlohmann::json& req) {
    std::lock_guard lock(task_mutex_[static_cast<std::size_t>(t)]);
    auto cli = client();
    auto res = cli.Post(route, req.dump(), "application/json");
    if (!res) throw adapter_unavailable_error("sidecar unreachable at " + base_url_ + route);
    return parse_body(res->status, res->body, route);
  }

  std::string base_url_;
  Options opts_;
  std::array<std::mutex, static_cast<std::size_t>(Task::count)> task_mutex_;
};

}  // namespace t2vbench
