#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2vbench/bench_runner.hpp"
#include "t2vbench/core_model.hpp"
#include "t2vbench/error.hpp"
#include "t2vbench/rank_correlation.hpp"
#include "t2vbench/score_record.hpp"

namespace t2vbench {

struct HumanRating {
  std::string model_id;
  std::string prompt_id;
  std::string annotator_id;
  int rating = 0;
};

using RatingKey = std::pair<std::string, std::string>;  // (model_id, prompt_id)

struct HumanAggregate {
  std::map<RatingKey, double> means;
  std::vector<std::string> warnings;
};

inline std::vector<HumanRating> load_human_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open ratings file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::vector<HumanRating> out;
  const auto fail = [&](const std::string& msg) {
    throw schema_error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_trimmed(line, ',');
    if (line_no == 1) {
      if (cells != std::vector<std::string>{"model_id", "prompt_id", "annotator_id", "rating"})
        fail("expected header model_id,prompt_id,annotator_id,rating");
      continue;
    }
    if (cells.size() != 4) fail("expected 4 columns");
    HumanRating r{cells[0], cells[1], cells[2], 0};
    if (r.model_id.empty() || r.prompt_id.empty()) fail("empty key");
    std::size_t used = 0;
    try {
      r.rating = std::stoi(cells[3], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cells[3].size()) fail("rating '" + cells[3] + "' is not an integer");
    if (r.rating < 1 || r.rating > 5) fail("rating must be 1..5");
    out.push_back(std::move(r));
  }
  if (line_no == 0) throw schema_error(path.string() + ": empty ratings file");
  return out;
}

/// Mean rating per (model, prompt); keys without exactly three ratings are flagged.
inline HumanAggregate aggregate_human(const std::vector<HumanRating>& ratings) {
  std::map<RatingKey, std::vector<int>> grouped;
  for (const auto& r : ratings) {
    if (r.rating < 1 || r.rating > 5) throw out_of_range_error("rating must be 1..5");
    grouped[{r.model_id, r.prompt_id}].push_back(r.rating);
  }
  HumanAggregate agg;
  for (const auto& [key, v] : grouped) {
    long sum = 0;
    for (int x : v) sum += x;
    agg.means[key] = static_cast<double>(sum) / static_cast<double>(v.size());
    if (v.size() != 3)
      agg.warnings.push_back(key.first + "/" + key.second + ": " + std::to_string(v.size()) + " ratings");
  }
  return agg;
}

struct CorrelationResult {
  Category category{};
  double tau = 0;
  double rho = 0;
  int n = 0;
};

/// tau and rho between metric scores (x) and human means (y) for one category.
inline CorrelationResult correlate(const std::vector<ScoreRecord>& scores, const std::map<RatingKey, double>& human,
                                   Category category) {
  std::vector<double> xs, ys;
  std::set<RatingKey> seen;
  for (const auto& r : scores) {
    if (r.category != category) continue;
    RatingKey key{r.model_id, r.prompt_id};
    const auto it = human.find(key);
    if (it == human.end()) continue;
    if (!seen.insert(key).second) throw duplicate_id_error("duplicate record for " + key.first + "/" + key.second);
    xs.push_back(r.score);
    ys.push_back(it->second);
  }
  if (xs.size() < 2)
    throw insufficient_overlap_error(std::string(category_token(category)) + ": " + std::to_string(xs.size()) +
                                     " matched pairs");
  return {category, kendall_tau_b(xs, ys), spearman_rho(xs, ys), static_cast<int>(xs.size())};
}

/// One row of the correlation table; empty when a category could not be correlated.
struct CorrelationRow {
  Category category{};
  std::optional<CorrelationResult> result;
  std::string note;
};

inline std::vector<CorrelationRow> correlate_all(const std::vector<ScoreRecord>& scores,
                                                 const std::map<RatingKey, double>& human) {
  std::vector<CorrelationRow> rows;
  for (Category c : kAllCategories) {
    CorrelationRow row{c, std::nullopt, {}};
    try {
      row.result = correlate(scores, human, c);
    } catch (const insufficient_overlap_error& e) {
      row.note = "insufficient overlap";
    } catch (const degenerate_input_error& e) {
      row.note = "degenerate input";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Table formatting. Everything goes through these so output bytes depend only on the data.

namespace detail {

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  out << body;
  out.flush();
  if (!out) throw io_error("write failed for " + path.string());
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw io_error("cannot create directory " + dir.string());
}

}  // namespace detail

using Leaderboard = std::map<std::string, std::map<Category, double>>;  // model -> category -> mean

inline Leaderboard leaderboard(const std::vector<ScoreRecord>& records) {
  std::map<std::string, std::vector<ScoreRecord>> by_model;
  for (const auto& r : records) by_model[r.model_id].push_back(r);
  Leaderboard board;
  for (const auto& [model, recs] : by_model) board[model] = category_means(recs);
  return board;
}

inline std::string leaderboard_csv(const Leaderboard& board) {
  std::string out = "model_id";
  for (Category c : kAllCategories) out += "," + std::string(category_token(c));
  out += "\n";
  for (const auto& [model, means] : board) {
    out += detail::csv_cell(model);
    for (Category c : kAllCategories) {
      out += ",";
      if (const auto it = means.find(c); it != means.end()) out += detail::fixed4(it->second);
    }
    out += "\n";
  }
  return out;
}

inline std::string leaderboard_json(const Leaderboard& board) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [model, means] : board) {
    nlohmann::ordered_json row;
    row["model_id"] = model;
    for (Category c : kAllCategories) {
      const auto it = means.find(c);
      row[std::string(category_token(c))] = it == means.end() ? nlohmann::ordered_json(nullptr)
                                                              : nlohmann::ordered_json(it->second);
    }
    j.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

inline std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "metric,category,n,tau,rho,note\n";
  for (const auto& row : rows) {
    out += std::string(metric_for(row.category)) + "," + std::string(category_token(row.category)) + ",";
    if (row.result)
      out += std::to_string(row.result->n) + "," + detail::fixed4(row.result->tau) + "," +
             detail::fixed4(row.result->rho);
    else
      out += ",,";
    out += "," + detail::csv_cell(row.note) + "\n";
  }
  return out;
}

inline std::string correlation_json(const std::vector<CorrelationRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json o;
    o["metric"] = metric_for(row.category);
    o["category"] = category_token(row.category);
    if (row.result) {
      o["n"] = row.result->n;
      o["tau"] = row.result->tau;
      o["rho"] = row.result->rho;
    }
    if (!row.note.empty()) o["note"] = row.note;
    j.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

inline std::string records_jsonl(std::vector<ScoreRecord> records) {
  std::stable_sort(records.begin(), records.end(), record_order);
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

enum class ReportFormat { csv, json };

inline std::vector<ReportFormat> parse_formats(const std::string& list) {
  std::vector<ReportFormat> out;
  for (const auto& tok : detail::split_trimmed(list, ',')) {
    const auto f = detail::to_lower(tok);
    if (f == "csv") out.push_back(ReportFormat::csv);
    else if (f == "json") out.push_back(ReportFormat::json);
    else throw schema_error("unknown report format '" + tok + "'");
  }
  if (out.empty()) throw schema_error("no report format given");
  return out;
}

struct ReportFiles {
  std::vector<std::filesystem::path> written;
};

/// Writes records.jsonl, the leaderboard and (when given) the correlation table.
inline ReportFiles write_report(const std::vector<ScoreRecord>& records,
                                const std::optional<std::vector<CorrelationRow>>& correlations,
                                const std::filesystem::path& out_dir,
                                const std::vector<ReportFormat>& formats = {ReportFormat::csv}) {
  detail::ensure_dir(out_dir);
  ReportFiles files;
  const auto put = [&](const char* name, const std::string& body) {
    detail::write_file(out_dir / name, body);
    files.written.push_back(out_dir / name);
  };
  put("records.jsonl", records_jsonl(records));
  const auto board = leaderboard(records);
  for (auto f : formats) {
    if (f == ReportFormat::csv) put("leaderboard.csv", leaderboard_csv(board));
    else put("leaderboard.json", leaderboard_json(board));
    if (!correlations) continue;
    if (f == ReportFormat::csv) put("correlation.csv", correlation_csv(*correlations));
    else put("correlation.json", correlation_json(*correlations));
  }
  return files;
}

/// Appends records to `path` one line at a time, flushing after each.
class RecordStream {
 public:
  explicit RecordStream(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw io_error("cannot write " + path.string());
  }
  void write(const ScoreRecord& r) {
    out_ << to_json(r).dump() << '\n';
    out_.flush();
    if (!out_) throw io_error("record stream write failed");
  }

 private:
  std::ofstream out_;
};

inline void write_transcript(const std::filesystem::path& out_dir, const VideoEvaluation& ev) {
  if (!ev.record.transcript_ref) return;
  const auto path = out_dir / *ev.record.transcript_ref;
  detail::ensure_dir(path.parent_path());
  detail::write_file(path, transcript_json(ev).dump(2) + "\n");
}

inline std::string coverage_json(const Coverage& cov) {
  nlohmann::ordered_json j;
  j["evaluated"] = cov.evaluated;
  j["failed"] = cov.failed;
  j["missing_videos"] = cov.missing_videos;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (Category c : kAllCategories) {
    const auto it = cov.per_category.find(c);
    per[std::string(category_token(c))] = it == cov.per_category.end() ? 0 : it->second;
  }
  j["per_category"] = per;
  return j.dump(2) + "\n";
}

}  // namespace t2vbench
