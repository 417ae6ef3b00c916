#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"
#include "t2vbench/rubric_templates.hpp"

namespace t2vbench {

enum class RubricStage { describe, predict, endpoint, intermediate };

constexpr std::string_view stage_token(RubricStage s) noexcept {
  switch (s) {
    case RubricStage::describe: return "describe";
    case RubricStage::predict: return "predict";
    case RubricStage::endpoint: return "endpoint";
    case RubricStage::intermediate: return "intermediate";
  }
  return "";
}

inline std::string_view template_text(Category category, RubricStage stage) {
  using namespace templates;
  switch (category) {
    case Category::consist_attr:
      if (stage == RubricStage::describe) return kConsistAttrDescribe;
      if (stage == RubricStage::predict) return kConsistAttrPredict;
      break;
    case Category::dynamic_attr:
      if (stage == RubricStage::describe) return kDynamicAttrDescribe;
      if (stage == RubricStage::endpoint) return kDynamicAttrEndpoint;
      if (stage == RubricStage::intermediate) return kDynamicAttrIntermediate;
      break;
    case Category::action:
      if (stage == RubricStage::describe) return kActionDescribe;
      if (stage == RubricStage::predict) return kActionPredict;
      break;
    case Category::interaction:
      if (stage == RubricStage::describe) return kInteractionDescribe;
      if (stage == RubricStage::predict) return kInteractionPredict;
      break;
    default:
      break;
  }
  throw precondition_error("no judge template for " + std::string(category_token(category)) + "/" +
                           std::string(stage_token(stage)));
}

namespace detail {

inline std::string strip_question_mark(std::string s) {
  s = trim(s);
  if (!s.empty() && s.back() == '?') s.pop_back();
  return trim(s);
}

inline std::map<std::string, std::string, std::less<>> placeholder_values(const CategoryMeta& meta,
                                                                          std::string_view prompt_text) {
  std::map<std::string, std::string, std::less<>> v;
  if (!prompt_text.empty()) v["prompt"] = std::string(prompt_text);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConsistentAttrMeta>) {
          v["phrase_1"] = m.phrases[0];
          v["phrase_2"] = m.phrases[1];
        } else if constexpr (std::is_same_v<M, DynamicAttrMeta>) {
          v["initial state"] = m.state0;
          v["final state"] = m.state1;
        } else if constexpr (std::is_same_v<M, ActionMeta>) {
          v["obj1"] = strip_question_mark(m.phrase_0.noun);
          v["obj2"] = strip_question_mark(m.phrase_1.noun);
          v["obj1's action"] = strip_question_mark(m.phrase_0.noun_action);
          v["obj2's action"] = strip_question_mark(m.phrase_1.noun_action);
        }
      },
      meta);
  return v;
}

}  // namespace detail

/// Instantiates a judge template. Substituted text is not rescanned.
inline std::string render_prompt(Category category, RubricStage stage, const CategoryMeta& meta,
                                 std::string_view prompt_text) {
  const auto tmpl = template_text(category, stage);
  const auto values = detail::placeholder_values(meta, prompt_text);
  std::string out;
  out.reserve(tmpl.size() + 128);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw missing_placeholder_error("unterminated placeholder in template");
    const auto name = tmpl.substr(open + 1, close - open - 1);
    const auto it = values.find(name);
    if (it == values.end()) throw missing_placeholder_error("no value for {" + std::string(name) + "}");
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Response parsing.

/// First balanced `{...}` span in `text` that parses as a JSON object.
inline std::optional<nlohmann::json> first_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

enum class Option { A, B, C, D };

inline char option_letter(Option o) { return static_cast<char>('A' + static_cast<int>(o)); }

/// Extracts the two multiple-choice answers ("A1, D2"). Prefers the "option"
/// field of an embedded JSON object, otherwise scans the whole text. The
/// digit after each letter must name its question (1 then 2).
inline std::pair<Option, Option> parse_option_pair(std::string_view text) {
  std::string body(text);
  if (auto j = first_json_object(text); j && j->contains("option") && (*j)["option"].is_string())
    body = (*j)["option"].get<std::string>();
  static const std::regex pattern(R"(([A-D])\s*([0-9])\s*,\s*([A-D])\s*([0-9]))");
  std::smatch m;
  if (!std::regex_search(body, m, pattern)) throw unparseable_response_error("no option pair in judge output");
  if (m[2].str() != "1" || m[4].str() != "2")
    throw unparseable_response_error("option suffixes " + m[2].str() + "," + m[4].str() + " are not 1,2");
  return {static_cast<Option>(m[1].str()[0] - 'A'), static_cast<Option>(m[3].str()[0] - 'A')};
}

inline double option_value(Option o) {
  switch (o) {
    case Option::A: return 1.0;
    case Option::B: return 2.0 / 3.0;
    case Option::C: return 1.0 / 3.0;
    case Option::D: return 0.0;
  }
  return 0.0;
}

inline double consist_attr_score(Option o1, Option o2) { return (option_value(o1) + option_value(o2)) / 2.0; }

/// Integer "score" of the first JSON object in `text`, range-checked.
inline int parse_score_json(std::string_view text, int lo, int hi) {
  if (lo >= hi) throw precondition_error("parse_score_json needs lo < hi");
  const auto j = first_json_object(text);
  if (!j) throw unparseable_response_error("no JSON object in judge output");
  const auto it = j->find("score");
  if (it == j->end()) throw unparseable_response_error("judge JSON has no 'score'");
  long long value = 0;
  if (it->is_number_integer()) {
    value = it->get<long long>();
  } else if (it->is_number_float()) {
    const double d = it->get<double>();
    if (!std::isfinite(d) || d != std::floor(d)) throw unparseable_response_error("score is not an integer");
    value = static_cast<long long>(d);
  } else if (it->is_string()) {
    const auto s = detail::trim(it->get<std::string>());
    static const std::regex int_re(R"([+-]?[0-9]{1,9})");
    if (!std::regex_match(s, int_re)) throw unparseable_response_error("score '" + s + "' is not an integer");
    value = std::stoll(s);
  } else {
    throw unparseable_response_error("score has unsupported type");
  }
  if (value < lo || value > hi)
    throw out_of_range_error("score " + std::to_string(value) + " outside " + std::to_string(lo) + ".." +
                             std::to_string(hi));
  return static_cast<int>(value);
}

inline double action_score(int n) {
  if (n < 0 || n > 5) throw out_of_range_error("action rubric score must be 0..5");
  return n / 5.0;
}

inline double interaction_score(int n) {
  if (n < 1 || n > 5) throw out_of_range_error("interaction rubric score must be 1..5");
  return (n - 1) / 4.0;
}

// ---------------------------------------------------------------------------
// Dynamic attributes.

struct EndpointScores {
  int s_first_vs_state0 = 1;
  int s_last_vs_state1 = 1;
};

/// Intermediate-frame labels: 2 = initial state, 1 = final state, 0 = neither.
using IntermediateLabels = std::vector<int>;

/// Best fit of the labels to a monotone initial->final step: the maximum over
/// split points m of (#label-2 among the first m + #label-1 after m) / N.
inline double transition_credit(std::span<const int> labels) {
  if (labels.empty()) throw empty_input_error("no intermediate labels");
  for (int l : labels)
    if (l < 0 || l > 2) throw out_of_range_error("intermediate label must be 0, 1 or 2");
  const auto ones_total = static_cast<long>(std::count(labels.begin(), labels.end(), 1));
  long best = ones_total;  // m = 0
  long twos_before = 0, ones_before = 0;
  for (int l : labels) {
    if (l == 2) ++twos_before;
    if (l == 1) ++ones_before;
    best = std::max(best, twos_before + (ones_total - ones_before));
  }
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

inline double dynamic_attr_score(const EndpointScores& e, std::span<const int> labels) {
  for (int s : {e.s_first_vs_state0, e.s_last_vs_state1})
    if (s < 1 || s > 5) throw out_of_range_error("endpoint scores must be 1..5");
  const double e0 = (e.s_first_vs_state0 - 1) / 4.0;
  const double e1 = (e.s_last_vs_state1 - 1) / 4.0;
  return (e0 + e1 + transition_credit(labels)) / 3.0;
}

}  // namespace t2vbench
