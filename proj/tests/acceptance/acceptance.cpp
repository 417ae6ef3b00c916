// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "t2vbench.hpp"
#include "../support/oracles.hpp"
#include "../support/test_util.hpp"

using namespace t2vbench;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  void fail(const std::string& msg) {
    if (ok) why = msg;
    ok = false;
  }
  void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
};

int failures = 0;

void run(const char* name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "took %.2fs, budget %.0fs", secs, budget_s);
    c.fail(buf);
  }
  std::printf("%s %-28s (%.3fs)%s%s\n", c.ok ? "PASS" : "FAIL", name, secs, c.ok ? "" : " ", c.why.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

oracle::Box obox(const BoundingBox& b) { return {b.x0, b.y0, b.x1, b.y1}; }

// ---------------------------------------------------------------------------

void spatial_2d(Check& c) {
  std::mt19937 rng(1001);
  std::uniform_int_distribution<int> pos(0, 240), ext(1, 80);
  std::uniform_real_distribution<double> frac(0, 1);
  const std::pair<SpatialRelation, const char*> rels[] = {{SpatialRelation::left, "left"},
                                                          {SpatialRelation::right, "right"},
                                                          {SpatialRelation::above, "above"},
                                                          {SpatialRelation::below, "below"}};
  for (int i = 0; i < 10000; ++i) {
    // mix integer and fractional coordinates
    const auto coord = [&] { return i % 2 ? pos(rng) + 0.0 : pos(rng) + frac(rng); };
    const double ax = coord(), ay = coord(), bx = coord(), by = coord();
    const BoundingBox a{ax, ay, ax + ext(rng), ay + ext(rng)};
    const BoundingBox b{bx, by, bx + ext(rng), by + ext(rng)};
    const std::vector<Detection> dets{{"toddler", a, 0.8}, {"dog", b, 0.7}};
    int holding = 0;
    for (const auto& [rel, name] : rels) {
      const double got = frame_spatial_score_2d(dets, {rel, "toddler", "dog"}).score;
      const double want = oracle::single_pair_score(name, obox(a), obox(b));
      if (std::memcmp(&got, &want, sizeof got) != 0) {
        c.fail(std::string("pair ") + std::to_string(i) + " " + name + ": " + str(got) + " vs " + str(want));
        return;
      }
      holding += oracle::relation_holds(name, obox(a), obox(b));
      if (eval_2d_relation(a.center(), b.center(), rel) != oracle::relation_holds(name, obox(a), obox(b)))
        c.fail("relation predicate disagrees on pair " + std::to_string(i));
    }
    c.expect(holding <= 1, "two relations hold at once on pair " + std::to_string(i));
  }
}

void iou_properties(Check& c) {
  const BoundingBox a{0, 0, 10, 10}, b{5, 0, 15, 10};
  c.expect(iou(a, b) == 50.0 / 150.0, "hand case " + str(iou(a, b)));
  c.expect(std::fabs(iou(a, b) - 0.3333) < 5e-5, "hand case rounding");
  std::mt19937 rng(1002);
  std::uniform_real_distribution<double> u(0, 100), e(0.5, 40);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng), p = u(rng), q = u(rng);
    const BoundingBox r{x, y, x + e(rng), y + e(rng)}, s{p, q, p + e(rng), q + e(rng)};
    c.expect(iou(r, s) == iou(s, r), "asymmetric");
    c.expect(iou(r, r) == 1.0, "self IoU " + str(iou(r, r)));
    c.expect(iou(r, s) == oracle::iou(obox(r), obox(s)), "oracle mismatch");
    const BoundingBox far{r.x1 + 1, r.y0, r.x1 + 5, r.y1};
    c.expect(iou(r, far) == 0.0, "disjoint not zero");
  }
}

void numeracy(Check& c) {
  const std::vector<std::string> names{"bee", "butterfly", "ant"};
  const auto score_for = [](const std::vector<std::string>& objs, const std::vector<int>& req,
                            const std::vector<int>& have) {
    std::vector<Detection> dets;
    for (std::size_t i = 0; i < objs.size(); ++i)
      for (int k = 0; k < have[i]; ++k)
        dets.push_back({objs[i], {10.0 * k, 20.0 * static_cast<double>(i), 10.0 * k + 5, 20.0 * static_cast<double>(i) + 5}, 0.9});
    return frame_numeracy_score(dets, NumeracyMeta{objs, req}).score;
  };
  // one and two classes: every required value 1..8 against every count 0..9
  for (int r0 = 1; r0 <= 8; ++r0)
    for (int h0 = 0; h0 <= 9; ++h0) {
      c.expect(score_for({"bee"}, {r0}, {h0}) == (h0 == r0 ? 1.0 : 0.0), "single class");
      for (int r1 = 1; r1 <= 8; ++r1)
        for (int h1 = 0; h1 <= 9; ++h1) {
          const int k = (h0 == r0) + (h1 == r1);
          c.expect(score_for({"bee", "butterfly"}, {r0, r1}, {h0, h1}) == k / 2.0, "two classes");
        }
    }
  // three classes: every correct/incorrect composition for every requirement
  for (int r0 = 1; r0 <= 8; ++r0)
    for (int r1 = 1; r1 <= 8; ++r1)
      for (int r2 = 1; r2 <= 8; ++r2)
        for (int mask = 0; mask < 8; ++mask) {
          const std::vector<int> req{r0, r1, r2};
          std::vector<int> have(3);
          int k = 0;
          for (int i = 0; i < 3; ++i) {
            const bool right = mask >> i & 1;
            have[i] = right ? req[i] : (req[i] + 1 + i) % 10;  // never equal to req[i]
            k += right;
          }
          c.expect(score_for(names, req, have) == k / 3.0,
                   "three classes " + std::to_string(r0) + std::to_string(r1) + std::to_string(r2) + " mask " +
                       std::to_string(mask) + " got " + str(score_for(names, req, have)));
        }
}

// ---------------------------------------------------------------------------

Mask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  Mask m;
  m.width = w;
  m.height = h;
  m.bits.assign(static_cast<std::size_t>(w) * h, 0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) m.bits[static_cast<std::size_t>(y) * w + x] = 1;
  return m;
}

TrackedPoint line(double x, double y, double dx, double dy, int frames) {
  TrackedPoint p;
  for (int t = 0; t < frames; ++t) {
    p.positions.push_back({x + (t == frames - 1 ? dx : std::floor(dx * t / (frames - 1))),
                           y + (t == frames - 1 ? dy : std::floor(dy * t / (frames - 1)))});
    p.visible.push_back(true);
  }
  return p;
}

void motion(Check& c) {
  const EngineConfig cfg;
  constexpr int W = 256;
  const VideoAsset video{"v", 16, 8, W, W, std::vector<FrameRef>(16, std::filesystem::path("x"))};
  std::mt19937 rng(1003);
  std::uniform_int_distribution<int> corner(40, 100), size(16, 60), shift(-40, 40), disp(-30, 30), pick(0, 4);
  const Direction dirs[] = {Direction::left, Direction::right, Direction::up, Direction::down};
  int nonzero = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int frames = 5 + trial % 12;
    const bool two = trial % 3 == 0;
    const int x0 = corner(rng), y0 = corner(rng), x1 = x0 + size(rng), y1 = y0 + size(rng);
    const Mask m1 = rect_mask(W, W, x0, y0, x1, y1);
    const int n_fg = 1 << (trial % 4), n_bg = 1 << ((trial / 4) % 4);

    TrackSet ts{8, {}};
    const int fdx = disp(rng), fdy = disp(rng);
    for (int k = 0; k < n_fg; ++k)
      ts.points.push_back(line(x0 + k % (x1 - x0), y0 + k % (y1 - y0), fdx + k % 3, fdy - k % 2, frames));
    // background seeds in the top band, away from both masks
    for (int k = 0; k < n_bg; ++k) ts.points.push_back(line(2 + 7 * k, 4 + k % 20, disp(rng) / 4, disp(rng) / 4, frames));
    std::vector<std::optional<Mask>> masks{m1};
    MotionMeta meta{"a", dirs[trial % 4], std::nullopt, std::nullopt};
    if (two) {
      // second object: a small square kept clear of the frame edge under any shift
      const Mask m2 = rect_mask(W, W, 170, 170, 186, 186);
      masks.push_back(m2);
      meta.object_2 = "b";
      meta.d_2 = dirs[(trial / 4) % 4];
      const int sdx = disp(rng), sdy = disp(rng);
      for (int k = 0; k < n_fg; ++k) ts.points.push_back(line(170 + k, 170 + k, sdx, sdy, frames));
    }
    if (pick(rng) == 0) ts.points[0].visible[static_cast<std::size_t>(frames / 2)] = false;

    const auto base = motion_binding_score(video, ts, masks, meta, cfg);
    nonzero += base.score > 0;

    // (a) the whole scene, masks included, shifted by a constant vector
    const int cx = shift(rng), cy = shift(rng);
    TrackSet moved = ts;
    for (auto& p : moved.points)
      for (auto& q : p.positions) q = {q.x + cx, q.y + cy};
    std::vector<std::optional<Mask>> moved_masks{rect_mask(W, W, x0 + cx, y0 + cy, x1 + cx, y1 + cy)};
    if (two) moved_masks.push_back(rect_mask(W, W, 170 + cx, 170 + cy, 186 + cx, 186 + cy));
    const auto shifted = motion_binding_score(video, moved, moved_masks, meta, cfg);
    c.expect(shifted.score - base.score == 0.0, "constant shift changed score in trial " + std::to_string(trial));
    for (std::size_t i = 0; i < base.verdicts.size(); ++i)
      c.expect(base.verdicts[i].relative == shifted.verdicts[i].relative, "constant shift changed relative motion");

    // (b) camera drift t*c added to every point; seeds and masks unchanged
    TrackSet panned = ts;
    for (auto& p : panned.points) {
      std::fill(p.visible.begin(), p.visible.end(), true);
      for (std::size_t t = 0; t < p.positions.size(); ++t)
        p.positions[t] = {p.positions[t].x + cx * static_cast<double>(t), p.positions[t].y + cy * static_cast<double>(t)};
    }
    TrackSet still = ts;
    for (auto& p : still.points) std::fill(p.visible.begin(), p.visible.end(), true);
    const auto drift_base = motion_binding_score(video, still, masks, meta, cfg);
    const auto drifted = motion_binding_score(video, panned, masks, meta, cfg);
    c.expect(drifted.score - drift_base.score == 0.0, "camera drift changed score in trial " + std::to_string(trial));
    for (std::size_t i = 0; i < drifted.verdicts.size(); ++i)
      c.expect(drift_base.verdicts[i].relative == drifted.verdicts[i].relative, "camera drift changed relative motion");
  }
  c.expect(nonzero > 100, "too few non-zero scores to be a meaningful test");

  // direction classification against the sign/dominance oracle
  const double eps = 0.01 * std::hypot(256.0, 256.0);
  std::uniform_real_distribution<double> u(-25, 25);
  for (int i = 0; i < 100000; ++i) {
    const double dx = i % 4 ? u(rng) : std::round(u(rng));
    const double dy = i % 9 == 0 ? (i % 2 ? dx : -dx) : u(rng);
    const auto got = classify_direction({dx, dy}, eps, 1.0);
    c.expect((got ? std::string(direction_token(*got)) : std::string()) == oracle::direction(dx, dy, eps),
             "direction oracle mismatch at " + str(dx) + "," + str(dy));
  }

  // worked examples
  const Mask car = rect_mask(W, W, 100, 100, 140, 140);
  const std::vector<std::optional<Mask>> one{car};
  const MotionMeta left{"car", Direction::left, std::nullopt, std::nullopt};
  TrackSet ex{8, {line(110, 110, -12, 1, 5), line(120, 130, -12, 1, 5), line(10, 10, 0, 0, 5), line(200, 30, 0, 0, 5)}};
  const auto r1 = motion_binding_score(video, ex, one, left, cfg);
  c.expect(r1.score == 1.0 && r1.verdicts[0].direction == Direction::left, "(-12,1) is not Left");
  TrackSet slow{8, {line(110, 110, 2, 1, 5), line(10, 10, 0, 0, 5)}};
  c.expect(motion_binding_score(video, slow, one, left, cfg).score == 0.0, "sub-eps motion scored");
  const Mask dog = rect_mask(W, W, 0, 0, 50, 50), cat = rect_mask(W, W, 100, 100, 150, 150);
  const std::vector<std::optional<Mask>> pair{dog, cat};
  TrackSet both{8, {line(10, 10, 20, 0, 5), line(110, 110, -15, 0, 5), line(220, 220, 0, 0, 5)}};
  const auto r3 = motion_binding_score(video, both, pair, {"dog", Direction::right, "cat", Direction::up}, cfg);
  c.expect(r3.score == 0.5, "two-object example gave " + str(r3.score));
}

// ---------------------------------------------------------------------------

std::vector<double> tied(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> levels(2, 15);
  std::uniform_int_distribution<int> v(0, levels(rng) - 1);
  std::vector<double> out(n);
  for (auto& x : out) x = v(rng) * 0.25;
  return out;
}

void rank_correlations(Check& c) {
  const std::vector<double> x{1, 2, 2, 3}, y{1, 2, 3, 3};
  c.expect(kendall_tau_b(x, y) == 0.8, "tau worked value " + str(kendall_tau_b(x, y)));
  c.expect(spearman_rho(x, y) == 5.0 / 6.0, "rho worked value " + str(spearman_rho(x, y)));
  const std::vector<double> up{1, 2, 3, 4, 5}, down{9, 7, 5, 3, 1};
  c.expect(kendall_tau_b(up, up) == 1.0 && spearman_rho(up, up) == 1.0, "+1 endpoint");
  c.expect(kendall_tau_b(up, down) == -1.0 && spearman_rho(up, down) == -1.0, "-1 endpoint");

  std::mt19937 rng(1004);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  int done = 0;
  while (done < 500) {
    const auto n = len(rng);
    const auto xs = tied(rng, n), ys = tied(rng, n);
    const auto flat = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double a) { return a == v[0]; });
    };
    if (flat(xs) || flat(ys)) continue;
    const double dt = std::fabs(kendall_tau_b(xs, ys) - oracle::kendall_tau_b(xs, ys));
    const double dr = std::fabs(spearman_rho(xs, ys) - oracle::spearman_rho(xs, ys));
    c.expect(dt <= 1e-12, "tau off by " + str(dt) + " at n=" + std::to_string(n));
    c.expect(dr <= 1e-12, "rho off by " + str(dr) + " at n=" + std::to_string(n));
    ++done;
  }
}

void dynamic_scoring(Check& c) {
  const std::vector<int> step{2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1};
  const std::vector<int> reversed{1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2};
  const std::vector<int> all_initial(14, 2);
  c.expect(dynamic_attr_score({5, 5}, step) == 1.0, "fixture 1.0");
  c.expect(std::fabs(dynamic_attr_score({1, 1}, reversed) - 0.1667) < 5e-5, "fixture 0.1667");
  c.expect(std::fabs(dynamic_attr_score({5, 1}, all_initial) - 0.6667) < 5e-5, "fixture 0.6667");

  std::vector<int> labels;
  std::vector<std::pair<double, double>> credit_vs_score;
  for (int len = 1; len <= 10; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    labels.assign(static_cast<std::size_t>(len), 0);
    for (int code = 0; code < total; ++code) {
      for (int i = 0, v = code; i < len; ++i, v /= 3) labels[static_cast<std::size_t>(i)] = v % 3;
      const double t = transition_credit(labels);
      if (t != oracle::best_split(labels)) {
        c.fail("transition credit mismatch at length " + std::to_string(len));
        return;
      }
      for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b) {
          const double s = dynamic_attr_score({a, b}, labels);
          if (a < 5 && !(dynamic_attr_score({a + 1, b}, labels) > s)) c.fail("not monotone in first endpoint");
          if (b < 5 && !(dynamic_attr_score({a, b + 1}, labels) > s)) c.fail("not monotone in last endpoint");
        }
      if (len == 10) credit_vs_score.emplace_back(t, dynamic_attr_score({3, 3}, labels));
    }
  }
  std::sort(credit_vs_score.begin(), credit_vs_score.end());
  for (std::size_t i = 1; i < credit_vs_score.size(); ++i) {
    const auto& [t0, s0] = credit_vs_score[i - 1];
    const auto& [t1, s1] = credit_vs_score[i];
    c.expect(t0 == t1 ? s0 == s1 : s0 < s1, "not monotone in transition credit");
  }
  // score ordered exactly like the oracle credit for fixed endpoints
  std::mt19937 rng(1005);
  std::uniform_int_distribution<int> lab(0, 2), e(1, 5);
  for (int i = 0; i < 20000; ++i) {
    std::vector<int> p(10), q(10);
    for (auto& v : p) v = lab(rng);
    for (auto& v : q) v = lab(rng);
    const EndpointScores es{e(rng), e(rng)};
    const double tp = oracle::best_split(p), tq = oracle::best_split(q);
    const double sp = dynamic_attr_score(es, p), sq = dynamic_attr_score(es, q);
    c.expect((tp < tq) == (sp < sq) && (tp == tq) == (sp == sq), "score order differs from credit order");
  }
}

void template_fidelity(Check& c) {
  const auto golden = [](const std::string& name) {
    return testutil::read_text(testutil::data_dir() / "templates" / (name + ".txt"));
  };
  const ConsistentAttrMeta car{{"a blue car", "a white picket fence"}};
  const DynamicAttrMeta leaf{"A green leaf", "A bright red leaf"};
  const ActionMeta dogcat{{"a dog?", "a dog runs through a field?"}, {"a cat?", "a cat climbs a tree?"}};
  const std::string action = "A dog runs through a field while a cat climbs a tree";
  const std::string inter = "A man hands a cup of coffee to a woman";
  const struct {
    Category cat;
    RubricStage stage;
    CategoryMeta meta;
    std::string text;
    const char* file;
  } cases[] = {
      {Category::consist_attr, RubricStage::describe, car, "", "consist-attr_describe"},
      {Category::consist_attr, RubricStage::predict, car, "", "consist-attr_predict"},
      {Category::dynamic_attr, RubricStage::describe, leaf, "", "dynamic-attr_describe"},
      {Category::dynamic_attr, RubricStage::endpoint, leaf, "", "dynamic-attr_endpoint"},
      {Category::dynamic_attr, RubricStage::intermediate, leaf, "", "dynamic-attr_intermediate"},
      {Category::action, RubricStage::describe, dogcat, action, "action_describe"},
      {Category::action, RubricStage::predict, dogcat, action, "action_predict"},
      {Category::interaction, RubricStage::describe, InteractionMeta{}, inter, "interaction_describe"},
      {Category::interaction, RubricStage::predict, InteractionMeta{}, inter, "interaction_predict"},
  };
  for (const auto& k : cases) {
    const auto want = golden(k.file);
    c.expect(!want.empty(), std::string("missing golden ") + k.file);
    c.expect(render_prompt(k.cat, k.stage, k.meta, k.text) == want, std::string("render differs: ") + k.file);
  }
}

// ---------------------------------------------------------------------------

struct RunFiles {
  std::string records, leaderboard, correlation;
};

RunFiles golden_pass(std::size_t workers, const testutil::TempDir& scratch, const std::string& tag) {
  const auto g = testutil::golden_dir();
  const auto suite = load_prompt_suite(g / "suite");
  std::vector<ScoreRecord> all;
  for (const std::string model : {"model_a", "model_b"}) {
    PerceptionGateway gw(std::make_shared<FixtureStore>(g / "fixtures" / model));
    SuiteOptions opts;
    opts.workers = workers;
    auto res = evaluate_suite(model, suite, g / "videos" / model, gw, EngineConfig{}, opts);
    all.insert(all.end(), res.records.begin(), res.records.end());
  }
  const auto human = aggregate_human(load_human_ratings(g / "human.csv"));
  const auto out = scratch / tag;
  write_report(all, correlate_all(all, human.means), out, {ReportFormat::csv});
  return {testutil::read_text(out / "records.jsonl"), testutil::read_text(out / "leaderboard.csv"),
          testutil::read_text(out / "correlation.csv")};
}

void golden_run(Check& c) {
  testutil::TempDir scratch;
  const auto first = golden_pass(1, scratch, "w1a");
  const auto runs = {golden_pass(1, scratch, "w1b"), golden_pass(8, scratch, "w8a"), golden_pass(8, scratch, "w8b")};
  for (const auto& r : runs) {
    c.expect(r.records == first.records, "records.jsonl differs between runs");
    c.expect(r.leaderboard == first.leaderboard, "leaderboard.csv differs between runs");
    c.expect(r.correlation == first.correlation, "correlation.csv differs between runs");
  }
  c.expect(first.leaderboard.rfind("model_id,consist-attr,dynamic-attr,spatial,motion,action,interaction,numeracy\n", 0) == 0,
           "leaderboard column order");
  std::istringstream lines(first.records);
  std::string line;
  std::size_t n = 0;
  std::ifstream in(testutil::golden_dir() / "expected_scores.json");
  const auto expected = nlohmann::json::parse(in);
  while (std::getline(lines, line)) {
    const auto rec = score_record_from_json(nlohmann::json::parse(line));
    const double want = expected.at(rec.model_id).at(rec.prompt_id).get<double>();
    c.expect(std::fabs(rec.score - want) < 1e-12, "score drift for " + rec.model_id + "/" + rec.prompt_id);
    ++n;
  }
  c.expect(n == 28, "expected 28 records, got " + std::to_string(n));
  c.expect(first.correlation.find(",,,") == std::string::npos, "a correlation row is empty");
}

void metadata(Check& c) {
  const auto parse = [](const char* line, Category cat) {
    return parse_record(nlohmann::json::parse(line), cat, "x");
  };
  const auto sp = parse(R"({"prompt": "A toddler walking on the left of a dog in a park", "spatial": "left", "object_1": "toddler", "object_2": "dog"})",
                        Category::spatial);
  const auto& s = std::get<SpatialMeta>(sp.meta);
  c.expect(s.relation == SpatialRelation::left && s.object_1 == "toddler" && s.object_2 == "dog", "spatial record");
  const auto ca = parse(R"({"prompt": "A blue car drives past a white picket fence on a sunny day", "phrases": "a blue car; a white picket fence"})",
                        Category::consist_attr);
  const auto& p = std::get<ConsistentAttrMeta>(ca.meta);
  c.expect(p.phrases[0] == "a blue car" && p.phrases[1] == "a white picket fence", "phrases record");
  const auto nu = parse(R"({"prompt": "three bees and five butterflies flying around a blooming garden", "objects": "bee,butterfly", "numbers": "3,5"})",
                        Category::numeracy);
  const auto& m = std::get<NumeracyMeta>(nu.meta);
  c.expect(m.objects == std::vector<std::string>{"bee", "butterfly"} && m.numbers == std::vector<int>{3, 5},
           "numeracy record");
  bool rejected = false;
  try {
    parse(R"({"prompt": "nine bees", "objects": "bee", "numbers": "9"})", Category::numeracy);
  } catch (const schema_error&) {
    rejected = true;
  }
  c.expect(rejected, "numeracy count 9 accepted");
}

}  // namespace

int main() {
  run("2d-spatial-oracle", 5, spatial_2d);
  run("iou-properties", 0, iou_properties);
  run("numeracy-k-over-n", 0, numeracy);
  run("motion-pan-invariance", 0, motion);
  run("rank-correlations", 10, rank_correlations);
  run("dynamic-attr-scoring", 30, dynamic_scoring);
  run("template-fidelity", 0, template_fidelity);
  run("golden-run-determinism", 60, golden_run);
  run("metadata-ingestion", 0, metadata);
  return failures ? 1 : 0;
}
