#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"
#include "t2vbench/frame_sampler.hpp"
#include "t2vbench/geometry_metrics.hpp"
#include "t2vbench/mllm_metrics.hpp"
#include "t2vbench/motion_metric.hpp"
#include "t2vbench/perception.hpp"
#include "t2vbench/score_record.hpp"

namespace t2vbench {

/// One judge exchange kept for audit.
struct TranscriptEntry {
  std::string request_id;
  std::vector<std::string> turns;
  std::vector<std::string> texts;
};

struct VideoEvaluation {
  ScoreRecord record;
  std::vector<TranscriptEntry> transcript;
};

// Judge request keys; fixture stores name their files after these.
inline constexpr std::string_view kGridJudgeKey = "grid-llava";
inline constexpr std::string_view kEndpointJudgeKey = "d-llava-endpoint";
inline constexpr std::string_view kIntermediateJudgeKey = "d-llava-intermediate";

namespace detail {

class VideoEvaluator {
 public:
  VideoEvaluator(const PromptRecord& prompt, const VideoAsset& video, const PerceptionGateway& gateway,
                 const EngineConfig& cfg, VideoEvaluation& out)
      : prompt_(prompt), video_(video), gateway_(gateway), cfg_(cfg), out_(out) {}

  double run() {
    switch (prompt_.category) {
      case Category::consist_attr:
      case Category::action:
      case Category::interaction: return grid_judge();
      case Category::dynamic_attr: return dynamic_attr();
      case Category::spatial: return spatial(std::get<SpatialMeta>(prompt_.meta));
      case Category::numeracy: return numeracy(std::get<NumeracyMeta>(prompt_.meta));
      case Category::motion: return motion(std::get<MotionMeta>(prompt_.meta));
    }
    return 0.0;
  }

 private:
  ArtifactKey key(std::optional<int> frame) const { return {video_.video_id, frame, video_.width, video_.height}; }

  const FrameRef& frame(int index) const { return video_.frames[static_cast<std::size_t>(index)]; }

  void note(std::string s) { out_.record.notes.push_back(std::move(s)); }

  MllmResponse ask(std::optional<int> frame_index, std::string_view judge_key, std::vector<ImageSource> images,
                   std::vector<std::string> turns) {
    MllmRequest req{std::string(judge_key), std::move(images), std::move(turns)};
    auto resp = gateway_.query_mllm(key(frame_index), req);
    out_.transcript.push_back({resp.request_id, req.turns, resp.texts});
    return resp;
  }

  double grid_judge() {
    const auto plan = mllm_plan(video_, cfg_.mllm_frames);
    std::vector<FrameRef> refs;
    for (int idx : plan.indices) refs.push_back(frame(idx));
    ImageSource grid = [refs] {
      std::vector<Image> frames;
      for (const auto& r : refs) frames.push_back(load_frame(r));
      return compose_grid(frames);
    };
    std::vector<std::string> turns{render_prompt(prompt_.category, RubricStage::describe, prompt_.meta, prompt_.text),
                                   render_prompt(prompt_.category, RubricStage::predict, prompt_.meta, prompt_.text)};
    const auto resp = ask(std::nullopt, kGridJudgeKey, {grid}, std::move(turns));
    try {
      switch (prompt_.category) {
        case Category::consist_attr: {
          const auto [o1, o2] = parse_option_pair(resp.text);
          note(std::string("options ") + option_letter(o1) + "1," + option_letter(o2) + "2");
          return consist_attr_score(o1, o2);
        }
        case Category::action: return action_score(parse_score_json(resp.text, 0, 5));
        default: return interaction_score(parse_score_json(resp.text, 1, 5));
      }
    } catch (const error& e) {
      if (e.code() != errc::unparseable_response && e.code() != errc::out_of_range) throw;
      note(e.what());
      return 0.0;
    }
  }

  double dynamic_attr() {
    const auto plan = detection_plan(video_, cfg_.det_frames);
    if (plan.indices.size() < 3) throw precondition_error("dynamic attributes need at least 3 sampled frames");
    const auto single = [this](int idx) -> ImageSource {
      return [ref = frame(idx)] { return load_frame(ref); };
    };
    const auto describe = render_prompt(prompt_.category, RubricStage::describe, prompt_.meta, prompt_.text);
    const auto endpoint = render_prompt(prompt_.category, RubricStage::endpoint, prompt_.meta, prompt_.text);
    const auto intermediate = render_prompt(prompt_.category, RubricStage::intermediate, prompt_.meta, prompt_.text);

    const auto endpoint_score = [&](int idx) {
      const auto resp = ask(idx, kEndpointJudgeKey, {single(idx)}, {describe, endpoint});
      try {
        return parse_score_json(resp.text, 1, 5);
      } catch (const error& e) {
        if (e.code() != errc::unparseable_response && e.code() != errc::out_of_range) throw;
        note("frame " + std::to_string(idx) + ": " + e.what());
        return 1;
      }
    };
    EndpointScores e;
    e.s_first_vs_state0 = endpoint_score(plan.indices.front());
    e.s_last_vs_state1 = endpoint_score(plan.indices.back());

    IntermediateLabels labels;
    std::vector<double> per_frame;
    for (std::size_t i = 1; i + 1 < plan.indices.size(); ++i) {
      const int idx = plan.indices[i];
      const auto resp = ask(idx, kIntermediateJudgeKey, {single(idx)}, {intermediate});
      int label = 0;
      try {
        label = parse_score_json(resp.text, 0, 2);
      } catch (const error& err) {
        if (err.code() != errc::unparseable_response && err.code() != errc::out_of_range) throw;
        note("frame " + std::to_string(idx) + ": " + err.what());
      }
      labels.push_back(label);
      per_frame.push_back(static_cast<double>(label));
    }
    note("endpoints " + std::to_string(e.s_first_vs_state0) + "," + std::to_string(e.s_last_vs_state1));
    out_.record.frame_scores = std::move(per_frame);
    return dynamic_attr_score(e, labels);
  }

  std::vector<Detection> detect_frame(int idx, std::vector<std::string> queries) const {
    std::sort(queries.begin(), queries.end());
    queries.erase(std::unique(queries.begin(), queries.end()), queries.end());
    return dedup_boxes(gateway_.detect(key(idx), frame(idx), queries, cfg_.det_box_threshold), cfg_.dedup_iou);
  }

  double finish_frames(const std::vector<FrameScore>& frames) {
    std::vector<double> scores;
    for (const auto& f : frames) scores.push_back(f.score);
    out_.record.frame_scores = std::move(scores);
    return video_score(frames);
  }

  double spatial(const SpatialMeta& meta) {
    const auto plan = detection_plan(video_, cfg_.det_frames);
    std::vector<FrameScore> frames;
    for (int idx : plan.indices) {
      const auto dets = detect_frame(idx, {meta.object_1, meta.object_2});
      if (is_2d(meta.relation)) {
        frames.push_back(frame_spatial_score_2d(dets, meta, idx));
        continue;
      }
      if (!select_pair_3d(dets, meta)) {
        frames.push_back({idx, 0.0, std::nullopt, "object not detected"});
        continue;
      }
      try {
        const auto depth = gateway_.estimate_depth(key(idx), frame(idx));
        const auto segment = [&](const Detection& d) { return gateway_.segment(key(idx), frame(idx), d); };
        frames.push_back(frame_spatial_score_3d(dets, segment, depth, meta, idx));
      } catch (const empty_mask_error& e) {
        note("frame " + std::to_string(idx) + ": " + e.what());
        frames.push_back({idx, 0.0, std::nullopt, e.what()});
      }
    }
    return finish_frames(frames);
  }

  double numeracy(const NumeracyMeta& meta) {
    const auto plan = detection_plan(video_, cfg_.det_frames);
    std::vector<FrameScore> frames;
    for (int idx : plan.indices) frames.push_back(frame_numeracy_score(detect_frame(idx, meta.objects), meta, idx));
    return finish_frames(frames);
  }

  double motion(const MotionMeta& meta) {
    const auto plan = resample_to_fps(video_.src_fps, video_.frame_count, cfg_.track_fps);
    const int seed = plan.indices.front();
    std::vector<std::string> objects{meta.object_1};
    if (meta.object_2) objects.push_back(*meta.object_2);
    const auto dets = detect_frame(seed, objects);

    std::vector<std::optional<Mask>> masks;
    for (const auto& obj : objects) {
      const auto it = std::find_if(dets.begin(), dets.end(), [&](const Detection& d) { return d.query == obj; });
      if (it == dets.end()) {
        masks.emplace_back();
        continue;
      }
      try {
        masks.emplace_back(gateway_.segment(key(seed), frame(seed), *it));
      } catch (const empty_mask_error& e) {
        note(e.what());
        masks.emplace_back();
      }
    }
    if (std::none_of(masks.begin(), masks.end(), [](const auto& m) { return m.has_value(); })) {
      note("no motion object found on seed frame");
      return 0.0;
    }
    const auto tracks = gateway_.track(video_, plan, cfg_.track_grid_stride);
    const auto result = motion_binding_score(video_, tracks, masks, meta, cfg_);
    for (const auto& v : result.verdicts) {
      if (v.relative) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "rel=(%.4f,%.4f) dir=", v.relative->dx, v.relative->dy);
        note(v.object_query + ": " + buf + (v.direction ? std::string(direction_token(*v.direction)) : "none"));
      }
      if (!v.note.empty()) note(v.object_query + ": " + v.note);
    }
    return result.score;
  }

  const PromptRecord& prompt_;
  const VideoAsset& video_;
  const PerceptionGateway& gateway_;
  const EngineConfig& cfg_;
  VideoEvaluation& out_;
};

}  // namespace detail

/// Transcript location relative to the run's output directory.
inline std::string transcript_path(const std::string& model_id, const std::string& prompt_id) {
  return "transcripts/" + model_id + "/" + prompt_id + ".json";
}

inline nlohmann::ordered_json transcript_json(const VideoEvaluation& ev) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& t : ev.transcript) j.push_back({{"request_id", t.request_id}, {"turns", t.turns}, {"texts", t.texts}});
  return j;
}

/// Scores one video for its prompt's category. Gateway and judge failures
/// degrade the record to score 0 with a diagnostic instead of throwing.
inline VideoEvaluation evaluate_video(const PromptRecord& prompt, const VideoAsset& video,
                                      const PerceptionGateway& gateway, const EngineConfig& cfg,
                                      const std::string& model_id = {}) {
  VideoEvaluation out;
  auto& rec = out.record;
  rec.model_id = model_id;
  rec.prompt_id = prompt.prompt_id;
  rec.category = prompt.category;
  rec.metric_name = std::string(metric_for(prompt.category));
  try {
    detail::VideoEvaluator ev(prompt, video, gateway, cfg, out);
    rec.score = std::clamp(ev.run(), 0.0, 1.0);
  } catch (const error& e) {
    rec.score = 0.0;
    rec.frame_scores.reset();
    rec.error = e.code();
    rec.notes.push_back(e.what());
  }
  if (!out.transcript.empty()) rec.transcript_ref = transcript_path(model_id, prompt.prompt_id);
  return out;
}

// ---------------------------------------------------------------------------

struct Coverage {
  std::size_t evaluated = 0;
  std::vector<std::string> missing_videos;
  std::size_t failed = 0;
  std::map<Category, std::size_t> per_category;
};

struct SuiteResult {
  std::vector<ScoreRecord> records;  // canonical order
  std::map<Category, double> means;  // categories with at least one record
  Coverage coverage;
  std::vector<VideoEvaluation> evaluations;  // same order as records
};

struct SuiteOptions {
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::optional<std::set<Category>> categories;
  /// Called once per finished video, in completion order, from one thread at a time.
  std::function<void(const VideoEvaluation&)> on_record;
};

/// Order-independent mean: values are summed in sorted order.
inline double stable_mean(std::vector<double> values) {
  if (values.empty()) throw empty_input_error("mean of nothing");
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

inline std::map<Category, double> category_means(const std::vector<ScoreRecord>& records) {
  std::map<Category, std::vector<double>> by_cat;
  for (const auto& r : records) by_cat[r.category].push_back(r.score);
  std::map<Category, double> out;
  for (auto& [c, v] : by_cat) out[c] = stable_mean(std::move(v));
  return out;
}

/// Evaluates every prompt whose video exists at `video_root/<prompt_id>`.
inline SuiteResult evaluate_suite(const std::string& model_id, const std::vector<PromptRecord>& suite,
                                  const std::filesystem::path& video_root, const PerceptionGateway& gateway,
                                  const EngineConfig& cfg, const SuiteOptions& opts = {}) {
  cfg.validate();
  SuiteResult result;
  std::vector<const PromptRecord*> jobs;
  for (const auto& p : suite) {
    if (opts.categories && !opts.categories->count(p.category)) continue;
    std::error_code ec;
    if (!std::filesystem::is_directory(video_root / p.prompt_id, ec)) {
      result.coverage.missing_videos.push_back(p.prompt_id);
      continue;
    }
    jobs.push_back(&p);
  }
  if (jobs.empty()) throw empty_category_error("no evaluable videos under " + video_root.string());

  std::vector<std::optional<VideoEvaluation>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  const auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& prompt = *jobs[i];
      VideoEvaluation ev;
      try {
        const auto video = load_video_dir(video_root / prompt.prompt_id);
        ev = evaluate_video(prompt, video, gateway, cfg, model_id);
      } catch (const error& e) {
        ev.record = {model_id, prompt.prompt_id, prompt.category, 0.0, std::nullopt, std::nullopt,
                     std::string(metric_for(prompt.category)), {e.what()}, e.code()};
      }
      {
        std::lock_guard lock(sink_mutex);
        if (opts.on_record) opts.on_record(ev);
      }
      slots[i] = std::move(ev);
    }
  };
  std::size_t workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  for (auto& s : slots) result.evaluations.push_back(std::move(*s));
  std::stable_sort(result.evaluations.begin(), result.evaluations.end(),
                   [](const auto& a, const auto& b) { return record_order(a.record, b.record); });
  for (const auto& ev : result.evaluations) {
    result.records.push_back(ev.record);
    ++result.coverage.evaluated;
    ++result.coverage.per_category[ev.record.category];
    if (ev.record.error) ++result.coverage.failed;
  }
  result.means = category_means(result.records);
  return result;
}

}  // namespace t2vbench
