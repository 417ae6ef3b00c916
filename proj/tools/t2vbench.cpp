// t2vbench: evaluate videos against a prompt suite, correlate with human
// ratings, and rebuild report tables from a records file.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "t2vbench.hpp"

namespace fs = std::filesystem;
using namespace t2vbench;

namespace {

enum Exit { kOk = 0, kFailure = 1, kSchema = 2, kAdapter = 3, kPartial = 4 };

std::shared_ptr<PerceptionAdapter> make_adapter(const std::string& choice) {
  const auto colon = choice.find(':');
  if (colon == std::string::npos) throw schema_error("--adapter must be fixtures:DIR or http:URL");
  const auto kind = choice.substr(0, colon);
  const auto arg = choice.substr(colon + 1);
  if (kind == "fixtures") return std::make_shared<FixtureStore>(arg);
  if (kind == "http") {
    // http:http://host:port and http:host:port both work
    auto url = arg.rfind("http", 0) == 0 ? arg : "http://" + arg;
    auto sidecar = std::make_shared<HttpSidecar>(url);
    sidecar->health();
    return sidecar;
  }
  throw schema_error("unknown adapter kind '" + kind + "'");
}

std::set<Category> parse_categories(const std::string& list) {
  std::set<Category> out;
  for (const auto& tok : detail::split_trimmed(list, ',')) {
    const auto c = parse_category(tok);
    if (!c) throw schema_error("unknown category '" + tok + "'");
    out.insert(*c);
  }
  return out;
}

struct EvaluateArgs {
  std::string suite, videos, model_id, adapter, out, categories, config;
  std::size_t workers = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  std::vector<std::string> warnings;
  const auto suite = load_prompt_suite(a.suite, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto cfg = a.config.empty() ? EngineConfig{} : load_engine_config(a.config);
  cfg.validate();
  PerceptionGateway gateway(make_adapter(a.adapter));

  const fs::path out(a.out);
  detail::ensure_dir(out);
  const auto partial = out / "records.partial.jsonl";
  RecordStream stream(partial);

  SuiteOptions opts;
  opts.workers = a.workers;
  if (!a.categories.empty()) opts.categories = parse_categories(a.categories);
  opts.on_record = [&](const VideoEvaluation& ev) {
    stream.write(ev.record);
    write_transcript(out, ev);
  };
  const auto result = evaluate_suite(a.model_id, suite, a.videos, gateway, cfg, opts);

  write_report(result.records, std::nullopt, out, {ReportFormat::csv});
  detail::write_file(out / "coverage.json", coverage_json(result.coverage));
  fs::remove(partial);

  for (const auto& id : result.coverage.missing_videos) std::cerr << "missing video: " << id << "\n";
  std::printf("%-14s %s\n", "category", "mean");
  for (const auto& [c, m] : result.means) std::printf("%-14s %.4f\n", std::string(category_token(c)).c_str(), m);
  std::printf("evaluated %zu, failed %zu, missing %zu\n", result.coverage.evaluated, result.coverage.failed,
              result.coverage.missing_videos.size());

  bool adapter_down = false;
  for (const auto& r : result.records) {
    if (!r.error) continue;
    std::cerr << r.prompt_id << ": " << errc_name(*r.error) << (r.notes.empty() ? "" : ": " + r.notes.back()) << "\n";
    adapter_down = adapter_down || *r.error == errc::adapter_unavailable;
  }
  if (adapter_down) return kAdapter;
  return result.coverage.failed ? kPartial : kOk;
}

int run_correlate(const std::string& records_path, const std::string& human_path, const std::string& out) {
  const auto records = load_records(records_path);
  const auto human = aggregate_human(load_human_ratings(human_path));
  for (const auto& w : human.warnings) std::cerr << "warning: " << w << "\n";
  const auto rows = correlate_all(records, human.means);
  detail::ensure_dir(out);
  detail::write_file(fs::path(out) / "correlation.csv", correlation_csv(rows));
  std::cout << correlation_csv(rows);
  return kOk;
}

int run_report(const std::string& records_path, const std::string& out, const std::string& formats) {
  const auto records = load_records(records_path);
  const auto fmts = parse_formats(formats);
  detail::ensure_dir(out);
  const auto board = leaderboard(records);
  for (auto f : fmts) {
    if (f == ReportFormat::csv) detail::write_file(fs::path(out) / "leaderboard.csv", leaderboard_csv(board));
    else detail::write_file(fs::path(out) / "leaderboard.json", leaderboard_json(board));
  }
  std::cout << leaderboard_csv(board);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional text-to-video evaluation"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score one model's videos");
  evaluate->add_option("--suite", ev.suite, "prompt suite directory or file")->required();
  evaluate->add_option("--videos", ev.videos, "directory holding <prompt_id>/ video dirs")->required();
  evaluate->add_option("--model-id", ev.model_id, "model name written into records")->required();
  evaluate->add_option("--adapter", ev.adapter, "fixtures:DIR or http:URL")->required();
  evaluate->add_option("--out", ev.out, "output directory")->required();
  evaluate->add_option("--categories", ev.categories, "comma-separated category filter");
  evaluate->add_option("--config", ev.config, "engine config JSON");
  evaluate->add_option("--workers", ev.workers, "worker threads (default: hardware concurrency)");

  std::string records, human, out, formats = "csv";
  auto* correlate = app.add_subcommand("correlate", "Correlate metric scores with human ratings");
  correlate->add_option("--records", records)->required();
  correlate->add_option("--human", human)->required();
  correlate->add_option("--out", out)->required();

  auto* report = app.add_subcommand("report", "Rebuild leaderboard tables from records");
  report->add_option("--records", records)->required();
  report->add_option("--out", out)->required();
  report->add_option("--format", formats, "csv,json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*evaluate) return run_evaluate(ev);
    if (*correlate) return run_correlate(records, human, out);
    return run_report(records, out, formats);
  } catch (const error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case errc::schema:
      case errc::duplicate_id:
      case errc::unknown_direction: return kSchema;
      case errc::adapter_unavailable: return kAdapter;
      default: return kFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
