#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/error.hpp"

namespace t2vbench {

// Enumerators follow the leaderboard column order; CategoryMeta alternatives
// follow the same order so `meta.index()` maps onto the category.
enum class Category { consist_attr, dynamic_attr, spatial, motion, action, interaction, numeracy };

inline constexpr std::array<Category, 7> kAllCategories{
    Category::consist_attr, Category::dynamic_attr, Category::spatial, Category::motion,
    Category::action,       Category::interaction,  Category::numeracy};

constexpr std::string_view category_token(Category c) noexcept {
  switch (c) {
    case Category::consist_attr: return "consist-attr";
    case Category::dynamic_attr: return "dynamic-attr";
    case Category::spatial: return "spatial";
    case Category::motion: return "motion";
    case Category::action: return "action";
    case Category::interaction: return "interaction";
    case Category::numeracy: return "numeracy";
  }
  return "";
}

inline std::optional<Category> parse_category(std::string_view token) noexcept {
  for (auto c : kAllCategories) {
    if (category_token(c) == token) return c;
  }
  return std::nullopt;
}

enum class SpatialRelation { left, right, above, below, in_front_of, behind };

constexpr bool is_2d(SpatialRelation r) noexcept {
  return r == SpatialRelation::left || r == SpatialRelation::right || r == SpatialRelation::above ||
         r == SpatialRelation::below;
}

constexpr std::string_view relation_token(SpatialRelation r) noexcept {
  switch (r) {
    case SpatialRelation::left: return "left";
    case SpatialRelation::right: return "right";
    case SpatialRelation::above: return "above";
    case SpatialRelation::below: return "below";
    case SpatialRelation::in_front_of: return "in front of";
    case SpatialRelation::behind: return "behind";
  }
  return "";
}

/// Screen direction in image coordinates: +x to the right, +y downwards.
enum class Direction { left, right, up, down };

constexpr std::string_view direction_token(Direction d) noexcept {
  switch (d) {
    case Direction::left: return "left";
    case Direction::right: return "right";
    case Direction::up: return "up";
    case Direction::down: return "down";
  }
  return "";
}

constexpr Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::left: return Direction::right;
    case Direction::right: return Direction::left;
    case Direction::up: return Direction::down;
    case Direction::down: return Direction::up;
  }
  return d;
}

namespace detail {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_trimmed(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Range>
std::string join(const Range& parts, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += sep;
    out += p;
    first = false;
  }
  return out;
}

}  // namespace detail

inline Direction parse_direction(std::string_view token) {
  const auto t = detail::to_lower(token);
  if (t == "left") return Direction::left;
  if (t == "right") return Direction::right;
  if (t == "up") return Direction::up;
  if (t == "down") return Direction::down;
  throw unknown_direction_error("'" + std::string(token) + "' is not one of left/right/up/down");
}

inline SpatialRelation parse_relation(std::string_view token) {
  const auto t = detail::to_lower(detail::trim(token));
  for (auto r : {SpatialRelation::left, SpatialRelation::right, SpatialRelation::above,
                 SpatialRelation::below, SpatialRelation::in_front_of, SpatialRelation::behind}) {
    if (relation_token(r) == t) return r;
  }
  throw schema_error("unknown spatial relation '" + std::string(token) + "'");
}

struct ConsistentAttrMeta {
  std::array<std::string, 2> phrases;
  bool operator==(const ConsistentAttrMeta&) const = default;
};

struct DynamicAttrMeta {
  std::string state0;
  std::string state1;
  bool operator==(const DynamicAttrMeta&) const = default;
};

struct SpatialMeta {
  SpatialRelation relation{SpatialRelation::left};
  std::string object_1;
  std::string object_2;
  bool operator==(const SpatialMeta&) const = default;
};

struct MotionMeta {
  std::string object_1;
  Direction d_1{Direction::left};
  std::optional<std::string> object_2;
  std::optional<Direction> d_2;
  bool operator==(const MotionMeta&) const = default;
};

struct ActionPhrase {
  std::string noun;
  std::string noun_action;
  bool operator==(const ActionPhrase&) const = default;
};

struct ActionMeta {
  ActionPhrase phrase_0;
  ActionPhrase phrase_1;
  bool operator==(const ActionMeta&) const = default;
};

/// Interaction prompts are judged on their full text; there is nothing else to carry.
struct InteractionMeta {
  bool operator==(const InteractionMeta&) const = default;
};

struct NumeracyMeta {
  std::vector<std::string> objects;
  std::vector<int> numbers;
  bool operator==(const NumeracyMeta&) const = default;
};

using CategoryMeta = std::variant<ConsistentAttrMeta, DynamicAttrMeta, SpatialMeta, MotionMeta,
                                  ActionMeta, InteractionMeta, NumeracyMeta>;

inline Category meta_category(const CategoryMeta& meta) noexcept {
  return static_cast<Category>(meta.index());
}

struct PromptRecord {
  std::string prompt_id;
  Category category{Category::interaction};
  std::string text;
  CategoryMeta meta;
  bool operator==(const PromptRecord&) const = default;
};

inline constexpr int kMinCount = 1;
inline constexpr int kMaxCount = 8;

inline void validate_meta(const PromptRecord& record) {
  const auto where = [&](const std::string& msg) {
    return schema_error("record '" + record.prompt_id + "': " + msg);
  };
  if (record.text.empty()) throw where("prompt text is empty");
  if (meta_category(record.meta) != record.category) {
    throw where("metadata variant does not match category " +
                std::string(category_token(record.category)));
  }
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConsistentAttrMeta>) {
          for (const auto& p : m.phrases)
            if (p.empty()) throw where("empty phrase");
        } else if constexpr (std::is_same_v<M, DynamicAttrMeta>) {
          if (m.state0.empty() || m.state1.empty()) throw where("empty state");
        } else if constexpr (std::is_same_v<M, SpatialMeta>) {
          if (m.object_1.empty() || m.object_2.empty()) throw where("empty spatial object");
        } else if constexpr (std::is_same_v<M, MotionMeta>) {
          if (m.object_1.empty()) throw where("empty object_1");
          if (m.object_2.has_value() != m.d_2.has_value())
            throw where("object_2 and d_2 must be both present or both absent");
          if (m.object_2 && m.object_2->empty()) throw where("empty object_2");
        } else if constexpr (std::is_same_v<M, ActionMeta>) {
          for (const auto* p : {&m.phrase_0, &m.phrase_1})
            if (p->noun.empty() || p->noun_action.empty()) throw where("empty action phrase");
        } else if constexpr (std::is_same_v<M, NumeracyMeta>) {
          if (m.objects.empty()) throw where("no numeracy objects");
          if (m.objects.size() != m.numbers.size())
            throw where("objects/numbers length mismatch (" + std::to_string(m.objects.size()) +
                        " vs " + std::to_string(m.numbers.size()) + ")");
          for (const auto& o : m.objects)
            if (o.empty()) throw where("empty numeracy object");
          for (int n : m.numbers)
            if (n < kMinCount || n > kMaxCount)
              throw where("count " + std::to_string(n) + " outside 1..8");
        }
      },
      record.meta);
}

// ---------------------------------------------------------------------------
// Record (de)serialization. Keys follow the metadata generator output.

namespace detail {

inline const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "prompt_id", "category", "prompt",   "phrases",  "state 0",  "state0", "state 1",
      "state1",    "spatial",  "object_1", "object_2", "phrase_0", "phrase_1", "d_1",
      "d_2",       "objects",  "numbers"};
  return keys;
}

inline std::string require_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw schema_error(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw schema_error(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

inline std::string state_field(const nlohmann::json& j, const char* spaced, const char* compact) {
  if (j.contains(spaced)) return require_string(j, spaced);
  if (j.contains(compact)) return require_string(j, compact);
  throw schema_error(std::string("missing field '") + spaced + "'");
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key, char sep) {
  const auto it = j.find(key);
  if (it == j.end()) throw schema_error(std::string("missing field '") + key + "'");
  if (it->is_string()) return split_trimmed(it->get<std::string>(), sep);
  if (it->is_array()) {
    std::vector<std::string> out;
    for (const auto& e : *it) {
      if (!e.is_string()) throw schema_error(std::string("field '") + key + "' must hold strings");
      out.push_back(trim(e.get<std::string>()));
    }
    return out;
  }
  throw schema_error(std::string("field '") + key + "' must be a string or array");
}

inline ActionPhrase action_phrase(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw schema_error(std::string("missing field '") + key + "'");
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_string() || !(*it)[1].is_string())
    throw schema_error(std::string("field '") + key + "' must be [noun, noun with action]");
  return {(*it)[0].get<std::string>(), (*it)[1].get<std::string>()};
}

inline std::optional<std::string> optional_nonblank(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw schema_error(std::string("field '") + key + "' must be a string");
  auto s = trim(it->get<std::string>());
  if (s.empty()) return std::nullopt;
  return s;
}

inline int parse_count(const nlohmann::json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const auto s = trim(v.get<std::string>());
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw schema_error("count '" + s + "' is not a positive integer");
    if (s.size() > 6) throw schema_error("count '" + s + "' is out of range");
    return std::stoi(s);
  }
  throw schema_error("count must be an integer");
}

inline CategoryMeta parse_meta(Category category, const nlohmann::json& j) {
  switch (category) {
    case Category::consist_attr: {
      auto parts = string_list(j, "phrases", ';');
      if (parts.size() != 2)
        throw schema_error("'phrases' must hold exactly 2 phrases, got " + std::to_string(parts.size()));
      return ConsistentAttrMeta{{parts[0], parts[1]}};
    }
    case Category::dynamic_attr:
      return DynamicAttrMeta{trim(state_field(j, "state 0", "state0")),
                             trim(state_field(j, "state 1", "state1"))};
    case Category::spatial:
      return SpatialMeta{parse_relation(require_string(j, "spatial")),
                         trim(require_string(j, "object_1")), trim(require_string(j, "object_2"))};
    case Category::motion: {
      MotionMeta m;
      m.object_1 = trim(require_string(j, "object_1"));
      try {
        m.d_1 = parse_direction(trim(require_string(j, "d_1")));
        m.object_2 = optional_nonblank(j, "object_2");
        if (auto d2 = optional_nonblank(j, "d_2")) m.d_2 = parse_direction(*d2);
      } catch (const unknown_direction_error& e) {
        throw schema_error(e.what());
      }
      return m;
    }
    case Category::action:
      return ActionMeta{action_phrase(j, "phrase_0"), action_phrase(j, "phrase_1")};
    case Category::interaction:
      return InteractionMeta{};
    case Category::numeracy: {
      NumeracyMeta m;
      m.objects = string_list(j, "objects", ',');
      const auto it = j.find("numbers");
      if (it == j.end()) throw schema_error("missing field 'numbers'");
      if (it->is_string()) {
        for (const auto& s : split_trimmed(it->get<std::string>(), ','))
          m.numbers.push_back(parse_count(nlohmann::json(s)));
      } else if (it->is_array()) {
        for (const auto& v : *it) m.numbers.push_back(parse_count(v));
      } else if (it->is_number_integer()) {
        m.numbers.push_back(it->get<int>());
      } else {
        throw schema_error("'numbers' must be a comma list or array");
      }
      return m;
    }
  }
  throw schema_error("unhandled category");
}

}  // namespace detail

/// Parses one metadata object. `category` comes from the file stem for
/// per-category files; combined files carry a "category" key instead.
/// Unknown keys are reported through `warnings` and otherwise ignored.
inline PromptRecord parse_record(const nlohmann::json& j, std::optional<Category> category,
                                 std::string default_id,
                                 std::vector<std::string>* warnings = nullptr) {
  if (!j.is_object()) throw schema_error("record is not a JSON object");
  if (auto it = j.find("category"); it != j.end()) {
    if (!it->is_string()) throw schema_error("'category' must be a string");
    auto c = parse_category(it->get<std::string>());
    if (!c) throw schema_error("unknown category '" + it->get<std::string>() + "'");
    if (category && *category != *c)
      throw schema_error("record category '" + it->get<std::string>() + "' disagrees with file");
    category = c;
  }
  if (!category) throw schema_error("record has no category");

  PromptRecord rec;
  rec.category = *category;
  rec.prompt_id = j.contains("prompt_id") ? detail::require_string(j, "prompt_id") : std::move(default_id);
  rec.text = detail::trim(detail::require_string(j, "prompt"));
  rec.meta = detail::parse_meta(*category, j);
  if (warnings) {
    for (const auto& [key, _] : j.items()) {
      if (!detail::known_keys().count(key))
        warnings->push_back("record '" + rec.prompt_id + "': ignoring unknown field '" + key + "'");
    }
  }
  validate_meta(rec);
  return rec;
}

/// Canonical form: fixed key order, metadata in the generator's string encodings.
inline nlohmann::ordered_json to_json(const PromptRecord& rec) {
  nlohmann::ordered_json j;
  j["prompt_id"] = rec.prompt_id;
  j["category"] = category_token(rec.category);
  j["prompt"] = rec.text;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConsistentAttrMeta>) {
          j["phrases"] = m.phrases[0] + "; " + m.phrases[1];
        } else if constexpr (std::is_same_v<M, DynamicAttrMeta>) {
          j["state 0"] = m.state0;
          j["state 1"] = m.state1;
        } else if constexpr (std::is_same_v<M, SpatialMeta>) {
          j["spatial"] = relation_token(m.relation);
          j["object_1"] = m.object_1;
          j["object_2"] = m.object_2;
        } else if constexpr (std::is_same_v<M, MotionMeta>) {
          j["object_1"] = m.object_1;
          j["d_1"] = direction_token(m.d_1);
          j["object_2"] = m.object_2.value_or("");
          j["d_2"] = m.d_2 ? std::string(direction_token(*m.d_2)) : std::string();
        } else if constexpr (std::is_same_v<M, ActionMeta>) {
          j["phrase_0"] = {m.phrase_0.noun, m.phrase_0.noun_action};
          j["phrase_1"] = {m.phrase_1.noun, m.phrase_1.noun_action};
        } else if constexpr (std::is_same_v<M, NumeracyMeta>) {
          j["objects"] = detail::join(m.objects, ",");
          std::vector<std::string> nums;
          for (int n : m.numbers) nums.push_back(std::to_string(n));
          j["numbers"] = detail::join(nums, ",");
        }
      },
      rec.meta);
  return j;
}

inline std::string serialize_suite(const std::vector<PromptRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<PromptRecord> parse_lines(std::istream& in, std::optional<Category> category,
                                             const std::string& source,
                                             std::vector<std::string>* warnings) {
  std::vector<PromptRecord> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t ordinal = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    // Generator output lists objects with trailing commas; tolerate them.
    if (!body.empty() && body.back() == ',') body.pop_back();
    if (body.empty() || body[0] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw schema_error(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string default_id;
    if (category) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04zu", ordinal);
      default_id = std::string(category_token(*category)) + "_" + buf;
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04zu", ordinal);
      default_id = std::string("prompt_") + buf;
    }
    try {
      out.push_back(parse_record(j, category, default_id, warnings));
    } catch (const schema_error& e) {
      throw schema_error(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ++ordinal;
  }
  return out;
}

inline std::vector<PromptRecord> parse_file(const std::filesystem::path& path,
                                            std::optional<Category> category,
                                            std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return parse_lines(in, category, path.string(), warnings);
}

}  // namespace detail

/// Loads a prompt suite from a directory holding one `<category-token>.jsonl`
/// (or .json/.txt) file per category, or from a single combined file whose
/// records carry a "category" key. Directory files are read in leaderboard
/// category order; records keep file order.
inline std::vector<PromptRecord> load_prompt_suite(const std::filesystem::path& path,
                                                   std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  std::error_code ec;
  std::vector<PromptRecord> records;
  if (fs::is_directory(path, ec)) {
    bool any = false;
    for (auto c : kAllCategories) {
      for (const char* ext : {".jsonl", ".json", ".txt"}) {
        const auto file = path / (std::string(category_token(c)) + ext);
        if (fs::is_regular_file(file, ec)) {
          auto part = detail::parse_file(file, c, warnings);
          records.insert(records.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
          any = true;
          break;
        }
      }
    }
    if (!any) throw io_error("no category files found in " + path.string());
  } else if (fs::is_regular_file(path, ec)) {
    records = detail::parse_file(path, std::nullopt, warnings);
  } else {
    throw io_error("prompt suite not found: " + path.string());
  }

  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.prompt_id).second) throw duplicate_id_error("duplicate prompt_id '" + r.prompt_id + "'");
  }
  return records;
}

// ---------------------------------------------------------------------------

enum class DepthConvention { smaller_is_nearer };

struct EngineConfig {
  int mllm_frames = 6;
  int det_frames = 16;
  double track_fps = 8.0;
  double dedup_iou = 0.9;
  double det_box_threshold = 0.35;
  double motion_eps_frac = 0.01;
  double dominance_ratio = 1.0;
  int track_grid_stride = 8;
  DepthConvention depth_convention = DepthConvention::smaller_is_nearer;

  void validate() const {
    if (mllm_frames <= 0 || det_frames <= 0) throw schema_error("frame counts must be positive");
    if (!(track_fps > 0) || !(det_box_threshold > 0) || !(motion_eps_frac > 0) || track_grid_stride <= 0)
      throw schema_error("thresholds must be positive");
    if (!(dedup_iou > 0) || dedup_iou > 1) throw schema_error("dedup_iou must lie in (0,1]");
    if (!(dominance_ratio >= 1)) throw schema_error("dominance_ratio must be >= 1");
  }
};

inline EngineConfig load_engine_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw schema_error("config " + path.string() + ": " + e.what());
  }
  EngineConfig cfg;
  try {
    cfg.mllm_frames = j.value("mllm_frames", cfg.mllm_frames);
    cfg.det_frames = j.value("det_frames", cfg.det_frames);
    cfg.track_fps = j.value("track_fps", cfg.track_fps);
    cfg.dedup_iou = j.value("dedup_iou", cfg.dedup_iou);
    cfg.det_box_threshold = j.value("det_box_threshold", cfg.det_box_threshold);
    cfg.motion_eps_frac = j.value("motion_eps_frac", cfg.motion_eps_frac);
    cfg.dominance_ratio = j.value("dominance_ratio", cfg.dominance_ratio);
    cfg.track_grid_stride = j.value("track_grid_stride", cfg.track_grid_stride);
    if (j.contains("depth_convention") && j["depth_convention"] != "smaller_is_nearer")
      throw schema_error("depth_convention is fixed to smaller_is_nearer");
  } catch (const nlohmann::json::type_error& e) {
    throw schema_error(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace t2vbench
