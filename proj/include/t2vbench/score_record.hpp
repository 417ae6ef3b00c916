#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"

namespace t2vbench {

/// Metric designated for each category on the leaderboard.
constexpr std::string_view metric_for(Category c) noexcept {
  switch (c) {
    case Category::consist_attr:
    case Category::action:
    case Category::interaction: return "grid-llava";
    case Category::dynamic_attr: return "d-llava";
    case Category::spatial:
    case Category::numeracy: return "g-dino";
    case Category::motion: return "dot";
  }
  return "";
}

struct ScoreRecord {
  std::string model_id;
  std::string prompt_id;
  Category category{Category::interaction};
  double score = 0;
  std::optional<std::vector<double>> frame_scores;
  std::optional<std::string> transcript_ref;
  std::string metric_name;
  std::vector<std::string> notes;
  std::optional<errc> error;  // set when the video degraded to score 0 on failure

  bool operator==(const ScoreRecord&) const = default;
};

inline nlohmann::ordered_json to_json(const ScoreRecord& r) {
  nlohmann::ordered_json j;
  j["model_id"] = r.model_id;
  j["prompt_id"] = r.prompt_id;
  j["category"] = category_token(r.category);
  j["metric_name"] = r.metric_name;
  j["score"] = r.score;
  if (r.frame_scores) j["frame_scores"] = *r.frame_scores;
  if (r.transcript_ref) j["transcript_ref"] = *r.transcript_ref;
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (r.error) j["error"] = errc_name(*r.error);
  return j;
}

namespace detail {

inline std::optional<errc> errc_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(errc::empty_category); ++i) {
    const auto code = static_cast<errc>(i);
    if (errc_name(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace detail

inline ScoreRecord score_record_from_json(const nlohmann::json& j) {
  try {
    ScoreRecord r;
    r.model_id = j.at("model_id").get<std::string>();
    r.prompt_id = j.at("prompt_id").get<std::string>();
    const auto cat = parse_category(j.at("category").get<std::string>());
    if (!cat) throw schema_error("unknown category in record");
    r.category = *cat;
    r.metric_name = j.at("metric_name").get<std::string>();
    r.score = j.at("score").get<double>();
    if (!(r.score >= 0.0 && r.score <= 1.0)) throw schema_error("record score outside [0,1]");
    if (r.metric_name != metric_for(r.category))
      throw schema_error("metric '" + r.metric_name + "' is not designated for " + std::string(category_token(r.category)));
    if (j.contains("frame_scores")) r.frame_scores = j["frame_scores"].get<std::vector<double>>();
    if (j.contains("transcript_ref")) r.transcript_ref = j["transcript_ref"].get<std::string>();
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    if (j.contains("error")) r.error = detail::errc_from_name(j["error"].get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw schema_error(std::string("score record: ") + e.what());
  }
}

inline std::vector<ScoreRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open records file " + path.string());
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(score_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw schema_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const schema_error& e) {
      throw schema_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

/// Canonical record order for output files: prompt_id, then model_id.
inline bool record_order(const ScoreRecord& a, const ScoreRecord& b) {
  if (a.prompt_id != b.prompt_id) return a.prompt_id < b.prompt_id;
  return a.model_id < b.model_id;
}

}  // namespace t2vbench
